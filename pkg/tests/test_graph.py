import itertools
import random
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparsetww.errors import GraphError, PartitionError, SequenceError
from sparsetww.graph import (
    ContractionSequence,
    Graph,
    Partition,
    degeneracy,
    power,
    quotient,
    replay,
    replay_graphs,
    sequence_partitions,
)

from .conftest import graphs, graphs_with_sequence, petersen


def bfs_all(g):
    dist = {}
    for s in range(g.n):
        seen = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
        dist[s] = seen
    return dist


def naive_quotient_edges(g, blocks):
    out = set()
    for i, j in itertools.combinations(range(len(blocks)), 2):
        if any(g.has_edge(u, v) for u in blocks[i] for v in blocks[j]):
            out.add((i, j))
    return out


def test_graph_rejects_loops_and_bad_ids():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])


def test_from_edges_canonicalises_and_dedupes():
    g = Graph.from_edges(3, [(2, 0), (0, 2), (1, 2)])
    assert g.edges == {(0, 2), (1, 2)}
    assert g.degrees == (1, 1, 2)


def test_quotient_c4_halves_is_k2():
    g = Graph.cycle(4)
    q = quotient(g, Partition.of([[0, 1], [2, 3]]))
    assert q == Graph.complete(2)


@given(graphs())
def test_quotient_by_singletons_is_identity(g):
    assert quotient(g, Partition.singletons(g.n)) == g


def test_quotient_petersen_pairs_matches_block_scan():
    g = petersen()
    blocks = [[i, i + 5] for i in range(5)]
    q = quotient(g, Partition.of(blocks))
    assert set(q.edges) == naive_quotient_edges(g, blocks)


def test_invalid_partition_names_vertex():
    g = Graph.path(4)
    with pytest.raises(PartitionError, match="vertex 1 "):
        quotient(g, Partition.of([[0, 1], [1, 3]]))
    with pytest.raises(PartitionError, match="vertex 2 "):
        quotient(g, Partition.of([[0, 1], [3]]))


def test_power_path():
    assert set(power(Graph.path(4), 2).edges) == {(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)}


def test_power_c6_cubed_is_complete():
    assert power(Graph.cycle(6), 3) == Graph.complete(6)


@given(graphs(), st.integers(1, 4))
def test_power_matches_bfs(g, l):
    dist = bfs_all(g)
    expected = {(u, v) for u in range(g.n) for v in range(u + 1, g.n) if 1 <= dist[u].get(v, 99) <= l}
    assert set(power(g, l).edges) == expected


@given(graphs())
def test_power_one_is_identity(g):
    assert power(g, 1) == g


def test_degeneracy_examples():
    assert degeneracy(Graph.path(5))[0] == 1
    assert degeneracy(Graph.cycle(6))[0] == 2
    assert degeneracy(Graph.complete(5))[0] == 4


def brute_degeneracy(g):
    best = 0
    for k in range(1, g.n + 1):
        for xs in itertools.combinations(range(g.n), k):
            h, _ = g.induced(xs)
            best = max(best, min(h.degrees))
    return best


@given(graphs(max_n=7))
def test_degeneracy_matches_brute_force(g):
    k, order = degeneracy(g)
    assert k == brute_degeneracy(g)
    assert sorted(order) == list(range(g.n))
    # every vertex has at most k neighbours later in the order
    pos = {v: i for i, v in enumerate(order)}
    assert all(sum(pos[u] > pos[v] for u in g.adj[v]) <= k for v in range(g.n))
    assert k <= g.max_degree


def test_replay_c4():
    res = replay(Graph.cycle(4), ContractionSequence.of(4, [(0, 1), (2, 3), (4, 5)]))
    assert res.width == 2
    assert res.trajectory == (2, 2, 1, 0)


def test_replay_k2():
    assert replay(Graph.complete(2), ContractionSequence.of(2, [(0, 1)])).width == 1


def test_replay_reports_step_of_dead_vertex():
    s = ContractionSequence.of(4, [(0, 1), (0, 2)])
    with pytest.raises(SequenceError) as info:
        replay(Graph.cycle(4), s)
    assert info.value.step == 1


def test_replay_rejects_unborn_and_self_merges():
    with pytest.raises(SequenceError):
        replay(Graph.path(3), ContractionSequence.of(3, [(0, 3)]))
    with pytest.raises(SequenceError):
        replay(Graph.path(3), ContractionSequence.of(3, [(1, 1)]))
    with pytest.raises(SequenceError):
        replay(Graph.path(2), ContractionSequence.of(2, [(0, 1), (2, 0)]))


@given(graphs_with_sequence())
def test_replay_matches_quotient_per_prefix(gs):
    g, s = gs
    res = replay(g, s)
    parts = sequence_partitions(g.n, s)
    degs = [quotient(g, p).max_degree for p in parts]
    assert list(res.trajectory) == degs
    assert res.width == max(degs) >= g.max_degree


@given(graphs_with_sequence())
def test_replay_graphs_match_quotients(gs):
    g, s = gs
    for (h, ids), p in zip(replay_graphs(g, s), sequence_partitions(g.n, s)):
        assert h == quotient(g, p)
        assert len(ids) == len(p)


def test_replay_random_gnp8():
    rng = random.Random(4)
    for _ in range(30):
        edges = [e for e in itertools.combinations(range(8), 2) if rng.random() < 0.5]
        g = Graph.from_edges(8, edges)
        live, merges, nxt = list(range(8)), [], 8
        while len(live) > 1:
            u, v = rng.sample(live, 2)
            live.remove(u)
            live.remove(v)
            merges.append((u, v))
            live.append(nxt)
            nxt += 1
        s = ContractionSequence.of(8, merges)
        widths = [quotient(g, p).max_degree for p in sequence_partitions(8, s)]
        assert replay(g, s).width == max(widths)


def test_empty_and_single_vertex_width_zero():
    assert replay(Graph.empty(0), ContractionSequence(0, ())).width == 0
    assert replay(Graph.empty(1), ContractionSequence(1, ())).width == 0
    assert replay(Graph.empty(3), ContractionSequence.of(3, [(0, 1), (2, 3)])).width == 0


@given(graphs_with_sequence(max_n=7), st.data())
def test_subgraph_quotient_contained(gs, data):
    g, s = gs
    keep = [e for e in g.sorted_edges() if data.draw(st.booleans())]
    h = Graph.from_edges(g.n, keep)
    for p in sequence_partitions(g.n, s):
        assert quotient(h, p).edges <= quotient(g, p).edges


def test_then_composes_sequences():
    g = Graph.cycle(6)
    first = ContractionSequence.of(6, [(0, 3), (1, 4), (2, 5)])
    live = [6, 7, 8]
    rest = ContractionSequence.of(3, [(0, 1), (3, 2)])
    full = first.then(rest, live)
    assert full.merges == ((0, 3), (1, 4), (2, 5), (6, 7), (9, 8))
    assert full.is_complete
    # antipodal merges leave a triangle
    assert replay(g, full).trajectory[3:] == (2, 1, 0)
