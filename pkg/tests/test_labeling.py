import itertools
import random
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparsetww.errors import PreconditionError
from sparsetww.factorization import FunctionalOrientation
from sparsetww.labeling import close_or_equal_rows, gamma_label, is_close

from .conftest import bfs_distances, random_orientation


def close_by_subsequences(s, t):
    r = len(s)
    subs = {tuple(x) for x in itertools.combinations(s, r - 1)}
    return any(tuple(y) in subs for y in itertools.combinations(t, r - 1))


def test_is_close_examples():
    assert is_close((1, 2, 3), (2, 3, 4))
    assert not is_close((1, 2, 3), (3, 2, 1))
    assert is_close((5,), (7,))
    with pytest.raises(PreconditionError):
        is_close((1, 2), (1, 2, 3))


seqs = st.integers(1, 6).flatmap(
    lambda r: st.tuples(
        st.lists(st.integers(0, 3), min_size=r, max_size=r),
        st.lists(st.integers(0, 3), min_size=r, max_size=r),
    )
)


@given(seqs)
def test_is_close_matches_subsequence_enumeration(pair):
    s, t = pair
    assert is_close(s, t) == close_by_subsequences(s, t)
    assert is_close(s, t) == is_close(t, s)
    assert is_close(s, s)


def test_is_close_exhaustive_small_alphabet():
    for r in range(1, 5):
        words = list(itertools.product(range(3), repeat=r))
        for s in words:
            for t in words:
                assert is_close(s, t) == close_by_subsequences(s, t)


def test_close_rows_vectorised():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 3, size=(300, 4))
    y = rng.integers(0, 3, size=(300, 4))
    got = close_or_equal_rows(x, y)
    assert got.tolist() == [is_close(a.tolist(), b.tolist()) for a, b in zip(x, y)]


def test_directed_four_cycle():
    d = FunctionalOrientation(4, (1, 2, 3, 0))
    assert gamma_label(d, 2).labels == ((0, 1), (1, 2), (2, 3), (3, 0))


def test_isolated_vertex_gets_padding():
    res = gamma_label(FunctionalOrientation(1, (None,)), 3)
    (lab,) = res.labels
    assert len(set(lab)) == 3 and all(x >= 1 for x in lab)
    assert list(res.padding[0]) == list(lab)


def test_r_must_be_positive():
    with pytest.raises(PreconditionError):
        gamma_label(FunctionalOrientation(2, (1, None)), 0)


def audit(d, r):
    res = gamma_label(d, r)
    g = d.underlying()
    assert all(len(set(lab)) == r for lab in res.labels)
    for u, v in g.edges:
        assert is_close(res.labels[u], res.labels[v])
    holders = defaultdict(list)
    for v, lab in enumerate(res.labels):
        for x in lab:
            holders[x].append(v)
    dist = {}
    for vs in holders.values():
        for u, v in itertools.combinations(vs, 2):
            if u not in dist:
                dist[u] = bfs_distances(g, u)
            assert dist[u].get(v, 10**9) <= 3 * r - 3, (u, v)
    return res


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_random_orientations(r):
    rng = random.Random(r)
    for n in (1, 2, 5, 30, 200):
        for _ in range(3):
            audit(random_orientation(n, rng), r)


@given(st.integers(1, 40), st.integers(1, 5), st.randoms(use_true_random=False))
def test_labels_property(n, r, rng):
    audit(random_orientation(n, rng, p_sink=0.2), r)


def test_paths_and_long_cycles():
    # a long path ending in a sink and a cycle longer than r
    n = 12
    out = [i + 1 for i in range(5)] + [None] + [7, 8, 9, 10, 11, 6]
    d = FunctionalOrientation(n, tuple(out))
    res = audit(d, 3)
    assert res.labels[0] == (0, 1, 2)
    assert res.labels[6] == (6, 7, 8)
    assert res.labels[11] == (11, 6, 7)
