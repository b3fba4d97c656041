import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given

from sparsetww.density import (
    check_alpha_balanced,
    check_xlogx,
    densest_bruteforce,
    denser_subgraph,
    density_of,
    mad_exact,
)
from sparsetww.errors import GuardError, PreconditionError
from sparsetww.graph import Graph
from sparsetww.random_models import gen_gnm

from .conftest import graphs


def subset_scan(g):
    """Max 2e(X)/|X| by plain enumeration of vertex subsets."""
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for xs in itertools.combinations(range(g.n), k):
            e = sum(1 for u, v in g.edges if u in xs and v in xs)
            best = max(best, Fraction(2 * e, k))
    return best


def test_mad_examples():
    assert mad_exact(Graph.complete(4))[0] == 3
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert mad_exact(star)[0] == Fraction(3, 2)
    assert mad_exact(Graph.empty(3)) == (0, frozenset({0}))
    with pytest.raises(PreconditionError):
        mad_exact(Graph.empty(0))


def test_bruteforce_examples():
    assert densest_bruteforce(Graph.cycle(5))[0] == 2
    assert densest_bruteforce(Graph.path(3))[0] == Fraction(4, 3)
    k5e = Graph.from_edges(5, [e for e in itertools.combinations(range(5), 2) if e != (0, 1)])
    assert densest_bruteforce(k5e)[0] == mad_exact(k5e)[0] == subset_scan(k5e)
    with pytest.raises(GuardError):
        densest_bruteforce(Graph.empty(25))


@given(graphs(min_n=1, max_n=9))
def test_mad_matches_subset_scan(g):
    value, witness = mad_exact(g)
    assert value == subset_scan(g)
    assert density_of(g, witness) == value
    assert densest_bruteforce(g)[0] == value
    assert value >= Fraction(2 * g.m, g.n)


def test_mad_on_random_g12():
    rng = random.Random(1)
    for seed in range(40):
        g = gen_gnm(12, rng.randint(5, 40), seed)
        assert mad_exact(g)[0] == densest_bruteforce(g)[0]


def test_mad_vertex_transitive_equals_average():
    for g in (Graph.cycle(9), Graph.complete(6)):
        assert mad_exact(g)[0] == Fraction(2 * g.m, g.n)


@given(graphs(min_n=2, max_n=9))
def test_mad_monotone_under_edge_addition(g):
    missing = [e for e in itertools.combinations(range(g.n), 2) if e not in g.edges]
    if not missing:
        return
    bigger = Graph.from_edges(g.n, list(g.edges) + [missing[0]])
    assert mad_exact(bigger)[0] >= mad_exact(g)[0]


@given(graphs(min_n=1, max_n=8))
def test_denser_subgraph_decision(g):
    value = mad_exact(g)[0]
    assert denser_subgraph(g, value) is None
    if value > 0:
        xs = denser_subgraph(g, value - Fraction(1, 100))
        assert xs is not None and density_of(g, xs) > value - Fraction(1, 100)


def alpha_brute(g, alpha):
    limit = math.floor(Fraction(alpha) * (g.n - 1))
    for k in range(1, min(limit, g.n) + 1):
        for xs in itertools.combinations(range(g.n), k):
            e = sum(1 for u, v in g.edges if u in xs and v in xs)
            if e * g.n > g.m * k:
                return False
    return True


def xlogx_brute(g, alpha):
    start = max(math.ceil(Fraction(alpha) * g.n + 1), 1)
    for k in range(start, g.n + 1):
        for xs in itertools.combinations(range(g.n), k):
            e = sum(1 for u, v in g.edges if u in xs and v in xs)
            if e > 0.1 * k * math.log(k) + 1e-9:
                return False
    return True


def test_alpha_balanced_examples():
    assert check_alpha_balanced(Graph.cycle(6), Fraction(1, 2))
    k4_plus = Graph.from_edges(12, itertools.combinations(range(4), 2))
    assert not check_alpha_balanced(k4_plus, Fraction(1, 2))


def test_xlogx_examples():
    assert check_xlogx(Graph.empty(10), Fraction(1, 2))
    assert not check_xlogx(Graph.complete(6), Fraction(1, 2))


@given(graphs(min_n=1, max_n=9))
def test_checkers_match_enumeration(g):
    for alpha in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
        assert check_alpha_balanced(g, alpha) == alpha_brute(g, alpha)
        assert check_xlogx(g, alpha) == xlogx_brute(g, alpha)


def test_checkers_on_spec_instances():
    g = gen_gnm(14, 21, 5)
    assert check_alpha_balanced(g, Fraction(1, 4)) == alpha_brute(g, Fraction(1, 4))
    h = gen_gnm(12, 14, 6)
    assert check_xlogx(h, Fraction(1, 3)) == xlogx_brute(h, Fraction(1, 3))
