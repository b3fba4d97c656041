"""Seeded generators for G(n, p), uniform G(n, m) and uniform random d-regular graphs.

All generators draw from ``numpy.random.default_rng(seed)`` (PCG64), so the same
parameters and seed always give the same graph.  Independent streams for
repeated trials come from :func:`derive_seed`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PreconditionError
from .graph import Graph

# Pairing-model acceptance probability is about exp(-(d^2 - 1) / 4); below this
# we refuse instead of spinning.
MIN_PAIRING_ACCEPTANCE = 1e-6
_DENSE_PAIR_LIMIT = 1 << 22


def derive_seed(seed: int, *indices: int) -> int:
    """64-bit seed for the stream indexed by ``indices`` under ``seed``."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, indices)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode colex pair indices: k = v(v-1)/2 + u with u < v."""
    k = np.asarray(k, dtype=np.int64)
    v = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) // 2).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    v = np.where(v * (v - 1) // 2 > k, v - 1, v)
    v = np.where((v + 1) * v // 2 <= k, v + 1, v)
    u = k - v * (v - 1) // 2
    return u, v


def _graph_from_indices(n: int, idx: np.ndarray) -> Graph:
    u, v = pair_from_index(idx)
    return Graph(n, frozenset(zip(u.tolist(), v.tolist())))


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p): each of the C(n,2) pairs independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise PreconditionError(f"n must be nonnegative, got {n}")
    total = n * (n - 1) // 2
    rng = np.random.default_rng(seed)
    if p == 0.0 or total == 0:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)
    if total <= _DENSE_PAIR_LIMIT:
        idx = np.flatnonzero(rng.random(total) < p)
        return _graph_from_indices(n, idx)
    # geometric skipping over the implicit pair index space
    chunks = []
    pos = -1
    batch = max(1024, int(total * p * 1.1) + 1024)
    while True:
        gaps = rng.geometric(p, size=batch)
        steps = pos + np.cumsum(gaps)
        inside = steps[steps < total]
        chunks.append(inside)
        if len(inside) < batch:
            break
        pos = int(steps[-1])
    return _graph_from_indices(n, np.concatenate(chunks))


def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniformly random graph with exactly m edges on n labelled vertices."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise PreconditionError(f"m must lie in [0, C(n,2)] = [0, {total}], got {m}")
    rng = np.random.default_rng(seed)
    if total <= _DENSE_PAIR_LIMIT or 2 * m > total:
        idx = rng.choice(total, size=m, replace=False)
        return _graph_from_indices(n, np.asarray(idx))
    # m << C(n,2): first m distinct draws form a uniform m-subset
    chosen: dict[int, None] = {}
    while len(chosen) < m:
        for k in rng.integers(0, total, size=2 * (m - len(chosen)) + 16).tolist():
            if k not in chosen:
                chosen[k] = None
                if len(chosen) == m:
                    break
    return _graph_from_indices(n, np.fromiter(chosen, dtype=np.int64, count=m))


def pairing_acceptance_estimate(d: int) -> float:
    return math.exp(-(d * d - 1) / 4.0)


def sample_regular(n: int, d: int, seed: int, max_attempts: int = 1_000_000) -> tuple[Graph, int]:
    """Uniform simple d-regular graph via the pairing model with full rejection.

    Returns the graph and the number of pairings drawn (1 = first try accepted).
    """
    if d < 0 or n < 0:
        raise PreconditionError("n and d must be nonnegative")
    if (n * d) % 2:
        raise PreconditionError(f"n*d must be even, got n={n}, d={d} (n*d={n * d})")
    if d >= n and not (n == 0 and d == 0):
        raise PreconditionError(f"need d < n, got n={n}, d={d}")
    if d == 0:
        return Graph.empty(n), 1
    if pairing_acceptance_estimate(d) < MIN_PAIRING_ACCEPTANCE:
        raise PreconditionError(
            f"d={d} is too large for exact pairing-model rejection "
            f"(acceptance ~ {pairing_acceptance_estimate(d):.1e})"
        )
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for attempt in range(1, max_attempts + 1):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u = pairs.min(axis=1)
        v = pairs.max(axis=1)
        if np.any(u == v):
            continue
        keys = u * n + v
        if np.unique(keys).size != keys.size:
            continue
        return Graph(n, frozenset(zip(u.tolist(), v.tolist()))), attempt
    raise PreconditionError(f"pairing model did not produce a simple graph in {max_attempts} attempts")


def gen_regular(n: int, d: int, seed: int) -> Graph:
    return sample_regular(n, d, seed)[0]
