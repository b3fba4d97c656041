"""Sparse twin-width: contraction sequences for sparse graphs, exact small-graph
solver, and the counting side of the width bounds."""

from .density import check_alpha_balanced, check_xlogx, densest_bruteforce, mad_exact
from .errors import (
    BudgetError,
    GraphError,
    GuardError,
    InvariantError,
    PartitionError,
    PreconditionError,
    SequenceError,
    TwwError,
)
from .factorization import FunctionalOrientation, decompose, minimal_ab
from .formats import (
    FormatError,
    read_edge_list,
    read_sequence,
    write_edge_list,
    write_sequence,
)
from .graph import (
    ContractionSequence,
    Graph,
    Partition,
    degeneracy,
    power,
    quotient,
    replay,
)
from .labeling import LabelingResult, gamma_label, is_close
from .lower_bounds import (
    BoundReport,
    CountingConstants,
    PartitionChain,
    bound_report,
    count_regular_lower,
    count_stww_upper,
    extract_partition,
    probability_ratio,
)
from .oracle import OracleResult, stww_exact
from .pipeline import (
    PipelineParams,
    PipelineReport,
    build_pipeline,
    contract_via_hom,
    greedy_contract,
    manual_params,
    select_params,
    verify,
)
from .pispace import (
    PiParams,
    erase_last,
    pi_adjacent,
    pi_contract_full,
    pi_degree_bound,
    pi_trajectory_contract,
    schedule_profile,
)
from .random_models import gen_gnm, gen_gnp, gen_regular

__version__ = "0.1.0"
