import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sparsetww.graph import ContractionSequence, Graph

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def complete_sequences(draw, n):
    """A uniformly drawn complete merge order for n vertices."""
    live = list(range(n))
    merges = []
    nxt = n
    while len(live) > 1:
        i = draw(st.integers(0, len(live) - 1))
        u = live.pop(i)
        j = draw(st.integers(0, len(live) - 1))
        v = live.pop(j)
        merges.append((u, v))
        live.append(nxt)
        nxt += 1
    return ContractionSequence(n, tuple(merges))


@st.composite
def graphs_with_sequence(draw, min_n=1, max_n=8):
    g = draw(graphs(min_n=min_n, max_n=max_n))
    return g, draw(complete_sequences(g.n))


def petersen() -> Graph:
    pg = nx.petersen_graph()
    return Graph.from_edges(10, pg.edges())


@pytest.fixture(scope="session")
def atlas7():
    """All 1044 graphs on seven vertices, one per isomorphism class."""
    return [Graph.from_edges(7, x.edges()) for x in nx.graph_atlas_g() if x.number_of_nodes() == 7]


def random_orientation(n, rng, p_sink=0.05):
    """Random out-degree-one digraph with no 2-cycles (so the underlying graph is simple)."""
    from sparsetww.factorization import FunctionalOrientation

    out = [None] * n
    for v in rng.sample(range(n), n):
        if n < 2 or rng.random() < p_sink:
            continue
        w = rng.randrange(n)
        if w != v and out[w] != v:
            out[v] = w
    return FunctionalOrientation(n, tuple(out))


def bfs_distances(g, s):
    from collections import deque

    seen = {s: 0}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    return seen


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
