"""Upper-bound pipeline: random homomorphism into Π, fiber merging, erasure schedule.

``build_pipeline`` factors the graph into ``a`` functional orientations, labels
each with paths of length ``r``, hashes every label symbol into ``[q]`` and maps
each vertex to the resulting tuple in Π.  Edges land on equal or adjacent
tuples, so merging each fiber and then running the erasure schedule on the
image gives a contraction sequence.  Every sequence is replayed before it is
returned.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .density import mad_exact
from .errors import InvariantError, PreconditionError, SequenceError
from .factorization import decompose
from .graph import ContractionSequence, Graph, Partition, quotient, replay
from .labeling import close_or_equal_rows, gamma_label
from .pispace import flat_trajectory_contract
from .random_models import derive_seed

log = logging.getLogger(__name__)

DEFAULT_RETRIES = 32
DEFAULT_Q_CAP = 10**6
# e^kappa can land a hair above an integer (n = 2^12, d = 3 gives exactly 4)
_CEIL_SLACK = 1e-9


@dataclass(frozen=True)
class PipelineParams:
    a: int
    b: int
    r: int
    q: int
    kappa: float
    ell: float
    d: Fraction
    max_retries: int = DEFAULT_RETRIES
    target_m: int = 1
    r_clamped: bool = False
    q_clamped: bool = False

    def __post_init__(self):
        if not (self.a >= self.b >= 1):
            raise PreconditionError(f"need a >= b >= 1, got a={self.a}, b={self.b}")
        if self.q < 2 or self.r < 1:
            raise PreconditionError(f"need q >= 2 and r >= 1, got q={self.q}, r={self.r}")
        if Fraction(self.a, self.b) < Fraction(self.d) / 2:
            raise PreconditionError(f"a/b = {Fraction(self.a, self.b)} is below d/2 = {Fraction(self.d) / 2}")
        if self.max_retries < 1:
            raise PreconditionError("max_retries must be at least 1")

    @property
    def rs(self) -> tuple:
        return (self.r,) * self.a


def _target_m(n: int, a: int, r: int, q: int) -> int:
    return max(1, -(-3 * n // q ** (a * r)))


def select_params(n: int, d, q_cap: int = DEFAULT_Q_CAP, max_retries: int = DEFAULT_RETRIES) -> PipelineParams:
    """Parameters for a graph on n vertices with mad at most d (d > 2)."""
    d = Fraction(d)
    if d <= 2:
        raise PreconditionError(
            f"d = {d} <= 2: use greedy_contract (max degree 2 graphs have width at most 2)"
        )
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    ell = math.log(n)
    log_ell = math.log(ell)
    if log_ell <= 0:
        raise PreconditionError(f"n = {n} is too small for the parameter formulas (log log n <= 0)")
    df = float(d)
    b = max(1, math.ceil(math.sqrt(ell) / (df * log_ell)))
    a = math.ceil(d * b / 2)
    r_raw = math.floor(ell / (2 * df * b * log_ell))
    r = max(r_raw, 2)
    kappa = ell / ((2 * a - b) * r)
    q_raw = max(2, math.ceil(math.exp(kappa) * (1 - _CEIL_SLACK))) if kappa < 700 else None
    q = q_cap if q_raw is None or q_raw > q_cap else q_raw
    return PipelineParams(
        a=a, b=b, r=r, q=q, kappa=kappa, ell=ell, d=d,
        max_retries=max_retries,
        target_m=_target_m(n, a, r, q),
        r_clamped=r != r_raw,
        q_clamped=q != q_raw,
    )


def manual_params(g: Graph, a: int, b: int, r: int, q: int, max_retries: int = DEFAULT_RETRIES) -> PipelineParams:
    """Caller-chosen (a, b, r, q); d is the exact mad of ``g``."""
    d = mad_exact(g)[0] if g.n else Fraction(0)
    ell = math.log(g.n) if g.n > 0 else 0.0
    return PipelineParams(
        a=a, b=b, r=r, q=q, kappa=ell / ((2 * a - b) * r), ell=ell, d=d,
        max_retries=max_retries, target_m=_target_m(g.n, a, r, q),
    )


@dataclass(frozen=True)
class PipelineReport:
    sequence: ContractionSequence
    width: int
    m_phi: int
    retries_used: int
    params: PipelineParams
    best_attempt: int = 0
    target_reached: bool = True
    image_size: int = 0
    prefix_width: int = 0
    theory_precondition: bool = False
    labels: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str
    width: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify(g: Graph, s: ContractionSequence, w: int) -> VerifyResult:
    """Well-formed, complete, and every intermediate graph has max degree <= w."""
    if s.initial_n != g.n:
        return VerifyResult(False, f"sequence starts from {s.initial_n} vertices, graph has {g.n}")
    try:
        s.check()
    except SequenceError as exc:
        return VerifyResult(False, str(exc))
    if not s.is_complete:
        return VerifyResult(False, f"sequence stops at {s.final_count} vertices")
    width = replay(g, s).width
    if width > w:
        return VerifyResult(False, f"replay width {width} exceeds {w}", width)
    return VerifyResult(True, "ok", width)


def _fiber_merges(g: Graph, fiber_of) -> tuple[ContractionSequence, Graph, list[int]]:
    fiber_of = [int(x) for x in fiber_of]
    if len(fiber_of) != g.n:
        raise PreconditionError(f"fiber map has {len(fiber_of)} entries for {g.n} vertices")
    if any(x < 0 for x in fiber_of):
        raise PreconditionError("image ids must be nonnegative")
    ids = sorted(set(fiber_of))
    rank = {x: i for i, x in enumerate(ids)}
    fibers: list[list[int]] = [[] for _ in ids]
    for v, x in enumerate(fiber_of):
        fibers[rank[x]].append(v)
    merges = []
    live = []
    nxt = g.n
    for members in fibers:
        cur = members[0]
        for v in members[1:]:
            merges.append((cur, v))
            cur = nxt
            nxt += 1
        live.append(cur)
    image = quotient(g, Partition(tuple(frozenset(f) for f in fibers)))
    return ContractionSequence(g.n, tuple(merges)), image, live


def contract_via_hom(g: Graph, fiber_of) -> tuple[ContractionSequence, Graph]:
    """Merge every fiber of ``fiber_of`` into one vertex.

    Fibers go in ascending image-id order, members in ascending order.  Vertex
    ``j`` of the returned graph is the j-th smallest image id.
    """
    prefix, image, _ = _fiber_merges(g, fiber_of)
    return prefix, image


def theory_precondition(n: int, max_degree: int, p: PipelineParams) -> bool:
    """n >= 6ra q^{ar+1} Δ^{3r}, the size needed for the probabilistic guarantee."""
    return n >= 6 * p.r * p.a * p.q ** (p.a * p.r + 1) * max_degree ** (3 * p.r)


def hom_audit(g: Graph, phi: np.ndarray, p: PipelineParams) -> int:
    """Number of edges whose ends map to neither equal nor Π-adjacent tuples."""
    if g.m == 0:
        return 0
    e = np.array(g.sorted_edges(), dtype=np.int64)
    hits = np.zeros(len(e), dtype=np.int64)
    for i in range(p.a):
        cols = slice(i * p.r, (i + 1) * p.r)
        hits += close_or_equal_rows(phi[e[:, 0], cols], phi[e[:, 1], cols])
    same = np.all(phi[e[:, 0]] == phi[e[:, 1]], axis=1)
    return int(np.count_nonzero(~same & (hits < p.b)))


def build_pipeline(g: Graph, p: PipelineParams, seed: int) -> PipelineReport:
    if g.n < 1:
        raise PreconditionError("graph has no vertices")
    if g.n == 1:
        return PipelineReport(ContractionSequence(1, ()), 0, 1, 0, p, image_size=1)
    orientations = decompose(g, p.a, p.b)
    labelings = [gamma_label(o, p.r) for o in orientations]
    arrays = [lab.as_array() for lab in labelings]
    best = None
    attempts = 0
    for attempt in range(p.max_retries):
        attempts += 1
        rng = np.random.default_rng(derive_seed(seed, attempt))
        phi = np.hstack([rng.integers(1, p.q + 1, size=lab.alphabet_size)[arr]
                         for lab, arr in zip(labelings, arrays)])
        image, inverse, counts = np.unique(phi, axis=0, return_inverse=True, return_counts=True)
        m_phi = int(counts.max())
        if best is None or m_phi < best[0]:
            best = (m_phi, attempt, phi, image, inverse.reshape(-1))
        if m_phi <= p.target_m:
            break
    m_phi, attempt, phi, image, inverse = best
    bad = hom_audit(g, phi, p)
    if bad:
        raise InvariantError(f"{bad} edges are not mapped to equal or adjacent Π vertices")
    prefix, _, live = _fiber_merges(g, inverse)
    tail = flat_trajectory_contract(image, p.rs)
    sequence = prefix.then(tail, live)
    result = replay(g, sequence)
    prefix_width = max(result.trajectory[: len(prefix) + 1])
    if prefix_width > m_phi * g.max_degree:
        raise InvariantError(f"fiber-merge width {prefix_width} exceeds m(φ)·Δ = {m_phi * g.max_degree}")
    if not sequence.is_complete:
        raise InvariantError("pipeline sequence does not reach a single vertex")
    if m_phi > p.target_m:
        log.info("m(φ) = %d above target %d after %d attempts", m_phi, p.target_m, attempts)
    return PipelineReport(
        sequence=sequence,
        width=result.width,
        m_phi=m_phi,
        retries_used=attempts,
        params=p,
        best_attempt=attempt,
        target_reached=m_phi <= p.target_m,
        image_size=len(image),
        prefix_width=prefix_width,
        theory_precondition=theory_precondition(g.n, g.max_degree, p),
        labels=phi,
    )


def greedy_contract(g: Graph) -> ContractionSequence:
    """Heuristic complete sequence: absorb leaves, else merge the edge with the
    smallest merged degree, else merge isolated vertices."""
    n = g.n
    if n <= 1:
        return ContractionSequence(n, ())
    nbrs: dict[int, set] = {v: set(g.adj[v]) for v in range(n)}
    leaves = [v for v in range(n) if len(nbrs[v]) == 1]
    heapq.heapify(leaves)
    edges = []

    def push_edges(x: int) -> None:
        for y in nbrs[x]:
            u, v = min(x, y), max(x, y)
            heapq.heappush(edges, (len(nbrs[u] | nbrs[v]) - 2, u, v))

    for v in range(n):
        for w in nbrs[v]:
            if v < w:
                heapq.heappush(edges, (len(nbrs[v] | nbrs[w]) - 2, v, w))
    merges = []
    nxt = n
    while len(nbrs) > 1:
        pair = None
        while leaves and pair is None:
            v = heapq.heappop(leaves)
            if v in nbrs and len(nbrs[v]) == 1:
                (w,) = nbrs[v]
                pair = (min(v, w), max(v, w))
        while edges and pair is None:
            key, u, v = heapq.heappop(edges)
            if u in nbrs and v in nbrs[u]:
                actual = len(nbrs[u] | nbrs[v]) - 2
                if actual == key:
                    pair = (u, v)
                else:
                    heapq.heappush(edges, (actual, u, v))
        if pair is None:
            live = sorted(nbrs)
            pair = (live[0], live[1])
        u, v = pair
        union = (nbrs.pop(u) | nbrs.pop(v)) - {u, v}
        w = nxt
        nxt += 1
        for x in union:
            nbrs[x] -= {u, v}
            nbrs[x].add(w)
        nbrs[w] = union
        merges.append((u, v))
        for x in list(union) + [w]:
            if len(nbrs[x]) == 1:
                heapq.heappush(leaves, x)
        push_edges(w)
        for x in union:
            push_edges(x)
    return ContractionSequence(n, tuple(merges))
