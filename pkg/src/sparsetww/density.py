"""Maximum average degree and subset-density checkers.

``mad_exact`` solves the densest-subgraph problem exactly with Goldberg's
min-cut construction: for a rational threshold g = p/q the cut network has
source arcs of capacity 2q into one node per edge, edge-to-endpoint arcs of
capacity 2q and vertex-to-sink arcs of capacity p.  A source side of the
minimum cut maximises ``2q e(X) - p |X|``.  Thresholds are updated to the
density of the set found until no denser set exists (Dinkelbach iteration),
so every comparison is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .errors import GuardError, PreconditionError
from .graph import Graph

Density = Fraction

BRUTE_FORCE_LIMIT = 24
XLOGX_TOL = 1e-9


def density_of(g: Graph, vertices) -> Fraction:
    xs = set(vertices)
    if not xs:
        raise PreconditionError("density of an empty vertex set is undefined")
    e = sum(1 for u, v in g.edges if u in xs and v in xs)
    return Fraction(2 * e, len(xs))


def _best_set(g: Graph, threshold: Fraction) -> tuple[int, frozenset]:
    """Maximise 2q·e(X) - p·|X| for threshold p/q; returns (value, X)."""
    p, q = threshold.numerator, threshold.denominator
    n, m = g.n, g.m
    if m == 0:
        return 0, frozenset()
    edges = np.array(g.sorted_edges(), dtype=np.int64)
    s, t = 0, m + n + 1
    enode = np.arange(1, m + 1)
    vnode = m + 1 + np.arange(n)
    rows = np.concatenate([np.zeros(m, np.int64), enode, enode, vnode])
    cols = np.concatenate([enode, m + 1 + edges[:, 0], m + 1 + edges[:, 1], np.full(n, t)])
    caps = np.concatenate([np.full(3 * m, 2 * q, np.int64), np.full(n, p, np.int64)])
    keep = caps > 0
    rows, cols, caps = rows[keep], cols[keep], caps[keep]
    if caps.max() > np.iinfo(np.int32).max:
        raise GuardError("flow capacities exceed 32-bit range")
    size = m + n + 2
    cap = csr_matrix((caps.astype(np.int32), (rows, cols)), shape=(size, size))
    result = maximum_flow(cap, s, t, method="dinic")
    flow = result.flow.tocsr().astype(np.int64)
    residual = (cap.astype(np.int64) - flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reach = breadth_first_order(residual, s, directed=True, return_predecessors=False)
    side = reach[(reach > m) & (reach <= m + n)] - (m + 1)
    xs = frozenset(int(v) for v in side)
    e = sum(1 for u, v in g.edges if u in xs and v in xs)
    return 2 * q * e - p * len(xs), xs


def denser_subgraph(g: Graph, threshold) -> frozenset | None:
    """A vertex set with 2e(X)/|X| > threshold, or None if mad(g) <= threshold."""
    value, xs = _best_set(g, Fraction(threshold))
    return xs if value > 0 else None


def mad_exact(g: Graph) -> tuple[Fraction, frozenset]:
    """Maximum average degree as an exact rational, with a maximising vertex set."""
    if g.n < 1:
        raise PreconditionError("mad of the empty graph is undefined")
    if g.m == 0:
        return Fraction(0), frozenset((0,))
    if min(g.degrees) == g.max_degree:
        # mad <= max degree, attained by the whole regular graph
        return Fraction(g.max_degree), frozenset(range(g.n))
    best = frozenset(range(g.n))
    current = Fraction(2 * g.m, g.n)
    while True:
        value, xs = _best_set(g, current)
        if value <= 0:
            return current, best
        current = density_of(g, xs)
        best = xs


def _subset_edge_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """e(G[X]) and |X| for every bitmask X over 0..n-1."""
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise GuardError(f"exhaustive subset scan limited to {BRUTE_FORCE_LIMIT} vertices, got {n}")
    counts = np.zeros(1 << n, dtype=np.int32)
    sizes = np.zeros(1 << n, dtype=np.int8)
    for k in range(n):
        low = np.arange(1 << k, dtype=np.uint32)
        lower_nbrs = sum(1 << w for w in g.adj[k] if w < k)
        counts[1 << k: 1 << (k + 1)] = counts[: 1 << k] + np.bitwise_count(low & np.uint32(lower_nbrs))
        sizes[1 << k: 1 << (k + 1)] = sizes[: 1 << k] + 1
    return counts, sizes


def _max_edges_by_size(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """For each size s, the max e(G[X]) over |X| = s and one mask attaining it."""
    counts, sizes = _subset_edge_counts(g)
    order = np.lexsort((-counts, sizes))
    first = np.searchsorted(sizes[order], np.arange(g.n + 1))
    masks = order[first]
    return counts[masks].astype(np.int64), masks


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(int(mask).bit_length()) if mask >> i & 1)


def densest_bruteforce(g: Graph) -> tuple[Fraction, frozenset]:
    """Exhaustive maximum of 2e(G[X])/|X| over nonempty X (n <= 24)."""
    if g.n < 1:
        raise PreconditionError("densest subgraph of the empty graph is undefined")
    best_e, masks = _max_edges_by_size(g)
    best, arg = Fraction(-1), 0
    for s in range(1, g.n + 1):
        val = Fraction(2 * int(best_e[s]), s)
        if val > best:
            best, arg = val, int(masks[s])
    return best, _mask_to_set(arg)


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def check_alpha_balanced(g: Graph, alpha) -> bool:
    """True iff e(G[X]) <= (m/n)|X| for every X with |X| <= alpha(n-1)."""
    n, m = g.n, g.m
    if n < 1:
        return True
    limit = math.floor(_as_fraction(alpha) * (n - 1))
    if limit < 1:
        return True
    best_e, _ = _max_edges_by_size(g)
    return all(n * int(best_e[s]) <= m * s for s in range(1, min(limit, n) + 1))


def check_xlogx(g: Graph, alpha) -> bool:
    """True iff e(G[X]) <= |X| log|X| / 10 for every X with |X| >= alpha*n + 1."""
    n = g.n
    if n < 1:
        return True
    start = max(math.ceil(_as_fraction(alpha) * n + 1), 1)
    if start > n:
        return True
    best_e, _ = _max_edges_by_size(g)
    return all(best_e[s] <= 0.1 * s * math.log(s) + XLOGX_TOL for s in range(start, n + 1))
