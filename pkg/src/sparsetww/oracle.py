"""Exact sparse twin-width of tiny graphs by exhaustive search.

The width bound w is raised from Δ(G) until a depth-first search finds a
complete merge order whose intermediate graphs all have max degree <= w.  Only
the newly merged vertex can gain degree, so each branch checks one degree.
Failed graphs are remembered under a canonical form together with the largest
w at which they failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import BudgetError, GuardError, PreconditionError
from .graph import ContractionSequence, Graph

MAX_VERTICES = 10
DEFAULT_NODE_BUDGET = 5_000_000
# above this many class-respecting orderings the refined order alone is the key
_PERMUTATION_LIMIT = 5040


@dataclass(frozen=True)
class OracleResult:
    stww: int
    witness: ContractionSequence
    nodes_explored: int


def _refine(masks: tuple) -> list[int]:
    """Colour classes from iterated degree refinement (colours are ranks)."""
    k = len(masks)
    colour = [0] * k
    while True:
        sig = [
            (colour[v], tuple(sorted(colour[u] for u in range(k) if masks[v] >> u & 1)))
            for v in range(k)
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(ranks) == len(set(colour)):
            return new
        colour = new


def _encode(masks: tuple, order) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    return tuple(sum(1 << pos[u] for u in range(len(masks)) if masks[v] >> u & 1) for v in order)


def canonical_key(masks: tuple) -> tuple:
    """Key shared by isomorphic graphs whenever the refined classes are small.

    Otherwise falls back to the refined order with index tie-break, which
    still determines the graph (so memo hits stay sound) but may miss
    isomorphic copies.
    """
    colour = _refine(masks)
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colour):
        classes.setdefault(c, []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    count = math.prod(math.factorial(len(grp)) for grp in groups)
    if count > _PERMUTATION_LIMIT:
        return (len(masks), _encode(masks, [v for grp in groups for v in grp]))
    best = None
    for perms in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        enc = _encode(masks, [v for p in perms for v in p])
        if best is None or enc < best:
            best = enc
    return (len(masks), best)


def _merge(masks: tuple, i: int, j: int) -> tuple:
    """Merge i < j; the new vertex goes last, survivors keep their relative order."""
    k = len(masks)
    keep = [v for v in range(k) if v != i and v != j]
    new_nbrs = (masks[i] | masks[j]) & ~((1 << i) | (1 << j))
    out = []
    for v in keep:
        m = masks[v]
        row = 0
        for idx, u in enumerate(keep):
            if m >> u & 1:
                row |= 1 << idx
        if new_nbrs >> v & 1:
            row |= 1 << len(keep)
        out.append(row)
    last = 0
    for idx, u in enumerate(keep):
        if new_nbrs >> u & 1:
            last |= 1 << idx
    out.append(last)
    return tuple(out)


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.failed: dict[tuple, int] = {}

    def feasible(self, masks: tuple, w: int, ids: list[int], next_id: int, merges: list) -> bool:
        k = len(masks)
        if k <= 1:
            return True
        key = canonical_key(masks)
        if self.failed.get(key, -1) >= w:
            return False
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetError(f"node budget {self.budget} exhausted")
        options = []
        for i in range(k):
            for j in range(i + 1, k):
                deg = bin((masks[i] | masks[j]) & ~((1 << i) | (1 << j))).count("1")
                if deg <= w:
                    options.append((deg, i, j))
        options.sort()
        for _, i, j in options:
            merges.append((ids[i], ids[j]))
            child_ids = [x for v, x in enumerate(ids) if v != i and v != j] + [next_id]
            if self.feasible(_merge(masks, i, j), w, child_ids, next_id + 1, merges):
                return True
            merges.pop()
        self.failed[key] = max(self.failed.get(key, -1), w)
        return False


def stww_exact(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    if g.n > MAX_VERTICES:
        raise GuardError(f"exact search is limited to {MAX_VERTICES} vertices, got {g.n}")
    if node_budget <= 0:
        raise PreconditionError("node_budget must be positive")
    if g.n <= 1:
        return OracleResult(0, ContractionSequence(g.n, ()), 0)
    masks = tuple(sum(1 << u for u in g.adj[v]) for v in range(g.n))
    search = _Search(node_budget)
    w = g.max_degree
    while True:
        merges: list = []
        if search.feasible(masks, w, list(range(g.n)), g.n, merges):
            return OracleResult(w, ContractionSequence(g.n, tuple(merges)), search.nodes)
        w += 1
