"""The product graphs Π(r_1..r_a; b, q) and their erasure contraction schedule.

A vertex of Π is an a-tuple of sequences, component i a sequence over the
symbols 1..q of length r_i.  Two distinct vertices are adjacent when at least
b components are close or equal.  Π is never built in the pipeline; only
adjacency tests and the merge schedule restricted to an image set are used.
Full materialisation (``pi_graph``) exists for validation at small sizes and
is guarded by a budget on the vertex count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import sparse

from .errors import GuardError, PreconditionError
from .graph import ContractionSequence, Graph
from .labeling import is_close


@dataclass(frozen=True)
class PiParams:
    a: int
    b: int
    q: int
    r: tuple

    def __post_init__(self):
        if not (self.a >= self.b >= 1):
            raise PreconditionError(f"need a >= b >= 1, got a={self.a}, b={self.b}")
        if self.q < 2:
            raise PreconditionError(f"need q >= 2, got {self.q}")
        if len(self.r) != self.a or any(ri < 1 for ri in self.r):
            raise PreconditionError(f"r must list {self.a} lengths >= 1, got {self.r}")

    @classmethod
    def uniform(cls, a: int, b: int, q: int, r: int) -> "PiParams":
        return cls(a, b, q, (r,) * a)

    @property
    def r_max(self) -> int:
        return max(self.r)

    @property
    def size(self) -> int:
        return self.q ** sum(self.r)


def conforms(u: Sequence[Sequence[int]], p: PiParams) -> bool:
    return len(u) == p.a and all(
        len(c) == ri and all(1 <= x <= p.q for x in c) for c, ri in zip(u, p.r)
    )


def _check(u, p: PiParams) -> None:
    if not conforms(u, p):
        raise PreconditionError(f"{u} is not a vertex of Π(r={p.r}; b={p.b}, q={p.q})")


def close_or_equal(s: Sequence[int], t: Sequence[int]) -> bool:
    # equal sequences are close as well; kept separate for readability at call sites
    return tuple(s) == tuple(t) or is_close(s, t)


def pi_adjacent(u, v, p: PiParams) -> bool:
    _check(u, p)
    _check(v, p)
    if tuple(map(tuple, u)) == tuple(map(tuple, v)):
        return False
    hits = 0
    for ui, vi in zip(u, v):
        if close_or_equal(ui, vi):
            hits += 1
            if hits >= p.b:
                return True
    return False


def pi_degree_bound(p: PiParams, r_max: int | None = None) -> int:
    """r^{2b} a^b q^{a r - b(r-1)} with r = r_max (exact integer)."""
    r = p.r_max if r_max is None else r_max
    if r < p.r_max:
        raise PreconditionError(f"r_max={r} is below the longest component {p.r_max}")
    return r ** (2 * p.b) * p.a ** p.b * p.q ** (p.a * r - p.b * (r - 1))


def pi_width_bound(p: PiParams, r_max: int | None = None) -> int:
    """r^{2b} a^b q^{a r - b(r-1) + 1}: the bound on the schedule's width."""
    return pi_degree_bound(p, r_max) * p.q


def erase_last(u, i: int):
    comps = [tuple(c) for c in u]
    if not 0 <= i < len(comps):
        raise PreconditionError(f"component index {i} out of range")
    if len(comps[i]) < 2:
        raise PreconditionError(f"component {i} has length {len(comps[i])}; nothing to erase")
    comps[i] = comps[i][:-1]
    return tuple(comps)


def enumerate_pi(p: PiParams, budget: int) -> list[tuple]:
    """All vertices of Π in lexicographic order."""
    if p.size > budget:
        raise GuardError(f"Π has {p.size} vertices, above the budget {budget}")
    per_comp = [list(itertools.product(range(1, p.q + 1), repeat=ri)) for ri in p.r]
    return list(itertools.product(*per_comp))


@lru_cache(maxsize=64)
def close_matrix(q: int, r: int) -> np.ndarray:
    """Dense close-or-equal relation on [q]^r in lexicographic order (bool, q^r x q^r)."""
    size = q ** r
    if r == 1:
        return np.ones((size, size), dtype=bool)
    digits = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
    weights = q ** np.arange(r - 2, -1, -1, dtype=np.int64)
    rows, cols = [], []
    for i in range(r):
        rows.append(np.arange(size))
        cols.append(np.delete(digits, i, axis=1) @ weights)
    inc = sparse.csr_matrix(
        (np.ones(size * r, dtype=np.int32), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, q ** (r - 1)),
    )
    inc.data[:] = 1
    return (inc @ inc.T).toarray() > 0


def close_count_matrix(q: int, rs: Sequence[int], budget: int = 4096) -> np.ndarray:
    """Number of close-or-equal components for every ordered pair of Π vertices (int8)."""
    size = q ** sum(rs)
    if size > budget:
        raise GuardError(f"Π has {size} vertices, above the budget {budget}")
    count = np.zeros((1, 1), dtype=np.int8)
    for ri in rs:
        c = close_matrix(q, ri).astype(np.int8)
        n0, n1 = count.shape[0], c.shape[0]
        count = (count[:, None, :, None] + c[None, :, None, :]).reshape(n0 * n1, n0 * n1)
    return count


def pi_graph(p: PiParams, budget: int = 4096) -> Graph:
    """Materialised Π; vertex ids follow ``enumerate_pi`` order."""
    count = close_count_matrix(p.q, p.r, budget)
    adj = count >= p.b
    np.fill_diagonal(adj, False)
    u, v = np.nonzero(np.triu(adj, 1))
    return Graph(adj.shape[0], frozenset(zip(u.tolist(), v.tolist())))


def _erasure_schedule(labels: Sequence[tuple], rs: Sequence[int]) -> list[tuple[int, int]]:
    """Merge list (new ids from len(labels)) for the erasure rounds on ``labels``.

    ``labels`` are flat tuples (components concatenated).  Rounds shorten
    component 0 column by column down to length 1, then component 1, and so on;
    each round merges the survivors whose shortened labels coincide (groups in
    ascending label order, members in ascending order).  Finally the remaining
    survivors are merged one by one in ascending label order.
    """
    offsets = [0]
    for ri in rs:
        offsets.append(offsets[-1] + ri)
    # erased columns are overwritten with -1, so keys keep their full width
    survivors = sorted((tuple(lab), i) for i, lab in enumerate(labels))
    merges: list[tuple[int, int]] = []
    next_id = len(labels)

    def chain(ids: list[int]) -> int:
        nonlocal next_id
        cur = ids[0]
        for x in ids[1:]:
            merges.append((cur, x))
            cur = next_id
            next_id += 1
        return cur

    for comp, ri in enumerate(rs):
        for length in range(ri, 1, -1):
            col = offsets[comp] + length - 1
            groups: dict[tuple, list] = {}
            for lab, vid in survivors:
                key = lab[:col] + (-1,) + lab[col + 1:]
                groups.setdefault(key, []).append(vid)
            survivors = [(key, chain(groups[key])) for key in sorted(groups)]
    if survivors:
        chain([vid for _, vid in survivors])
    return merges


def _flat(u) -> tuple:
    return tuple(x for c in u for x in c)


def pi_contract_full(p: PiParams, budget: int = 4096) -> ContractionSequence:
    """Full contraction sequence of Π (ids in ``enumerate_pi`` order)."""
    verts = enumerate_pi(p, budget)
    merges = _erasure_schedule([_flat(u) for u in verts], p.r)
    return ContractionSequence(len(verts), tuple(merges))


def pi_trajectory_contract(image: Sequence, p: PiParams) -> ContractionSequence:
    """The erasure schedule restricted to ``image`` (ids = positions in ``image``)."""
    flat = []
    for u in image:
        _check(u, p)
        flat.append(_flat(u))
    if len(set(flat)) != len(flat):
        raise PreconditionError("image vertices must be distinct")
    return ContractionSequence(len(flat), tuple(_erasure_schedule(flat, p.r)))


def flat_trajectory_contract(labels: np.ndarray, rs: Sequence[int]) -> ContractionSequence:
    """Same as ``pi_trajectory_contract`` for a (k, sum(rs)) array of distinct labels."""
    rows = [tuple(row) for row in np.asarray(labels).tolist()]
    if len(set(rows)) != len(rows):
        raise PreconditionError("image vertices must be distinct")
    return ContractionSequence(len(rows), tuple(_erasure_schedule(rows, rs)))


@dataclass(frozen=True)
class ScheduleProfile:
    """Max degree of Π and width of its erasure schedule, indexed by b (index 0 unused)."""

    q: int
    r: tuple
    max_degree: tuple
    width: tuple


def schedule_profile(q: int, rs: Sequence[int], budget: int = 4096) -> ScheduleProfile:
    """Δ(Π) and erasure-schedule width for every b in 1..a at once.

    Parts of the partially contracted Π are tracked through ``best[x, y]``, the
    largest number of close-or-equal components over vertex pairs drawn from
    parts x and y; for threshold b, x and y are adjacent iff ``best >= b``.
    A merge can only lower the degree of bystanders, so the width is the max of
    Δ(Π) and the degree of every newly created part.  Each erasure round is
    evaluated at once: after the first k+1 members of group j are merged, the
    new part sees each earlier group as one vertex and every later part
    (including its own group's remaining members) individually.
    """
    rs = tuple(rs)
    a = len(rs)
    best = close_count_matrix(q, rs, budget)
    np.fill_diagonal(best, 0)
    width = [0] * (a + 1)
    max_deg = [0] * (a + 1)
    for b in range(1, a + 1):
        max_deg[b] = width[b] = int((best >= b).sum(axis=1).max(initial=0))
    # flat labels in lexicographic order, the same order as enumerate_pi
    keys = np.array(list(itertools.product(range(q), repeat=sum(rs))), dtype=np.int16)
    keys = keys.reshape(best.shape[0], sum(rs))
    offsets = np.cumsum((0,) + rs)
    rounds = [offsets[c] + length - 1 for c, ri in enumerate(rs) for length in range(ri, 1, -1)]
    for col in rounds + [None]:
        if col is None:
            order = np.arange(keys.shape[0])
            starts = np.array([0])
        else:
            keys = keys.copy()
            old = keys.copy()
            keys[:, col] = -1
            order = np.lexsort(tuple(old.T[::-1]) + tuple(keys.T[::-1]))
            keys, old = keys[order], old[order]
            new_group = np.ones(len(keys), dtype=bool)
            new_group[1:] = np.any(keys[1:] != keys[:-1], axis=1)
            starts = np.flatnonzero(new_group)
        best = best[np.ix_(order, order)]
        _round_degrees(best, starts, a, width)
        if col is None:
            break
        size, n_groups = best.shape[0], len(starts)
        if n_groups and size % n_groups == 0 and np.all(np.diff(starts) == size // n_groups):
            k = size // n_groups
            best = _fold_max(_fold_max(best.reshape(n_groups, k, n_groups, k), axis=3), axis=1)
        else:
            best = np.maximum.reduceat(np.maximum.reduceat(best, starts, axis=0), starts, axis=1)
        np.fill_diagonal(best, 0)
        keys = keys[starts]
    return ScheduleProfile(q, rs, tuple(max_deg), tuple(width))


def _fold_max(x: np.ndarray, axis: int) -> np.ndarray:
    """``x.max(axis)`` by folding slices; much faster than a strided reduce for short axes."""
    if x.shape[axis] > 8:
        return x.max(axis=axis)
    out = np.take(x, 0, axis=axis).copy()
    for j in range(1, x.shape[axis]):
        np.maximum(out, np.take(x, j, axis=axis), out=out)
    return out


def _single_group_degrees(best: np.ndarray, a: int, width: list) -> None:
    """All parts merged in order: after the first p+1 the new part sees part y > p
    iff some x <= p has ``best[x, y] >= b``, i.e. iff first_hit(y) <= p."""
    size = best.shape[0]
    for b in range(1, a + 1):
        # best is symmetric, so the first hit of column y is the first hit of row y
        hit = best >= b
        first = np.argmax(hit, axis=1)
        seen = hit[np.arange(size), first] & (first < np.arange(size))
        diff = np.zeros(size + 1, dtype=np.int64)
        np.add.at(diff, first[seen], 1)
        np.add.at(diff, np.flatnonzero(seen), -1)
        deg = np.cumsum(diff[:-1])[1:]
        if deg.size and int(deg.max()) > width[b]:
            width[b] = int(deg.max())


def _round_degrees(best: np.ndarray, starts: np.ndarray, a: int, width: list) -> None:
    """Raise ``width[b]`` to the degree of every part created in one round."""
    size = best.shape[0]
    n_groups = len(starts)
    if size < 2 or n_groups == size:
        return
    if n_groups == 1:
        _single_group_degrees(best, a, width)
        return
    gid = np.zeros(size, dtype=np.int32)
    gid[starts[1:]] = 1
    gid = np.cumsum(gid, dtype=np.int32)
    rows = np.flatnonzero(np.arange(size) != starts[gid])
    k = size // n_groups
    if k * n_groups == size and np.all(np.diff(starts) == k):
        # equal groups (always the case on the full product): plain reshapes
        acc = best.reshape(n_groups, k, size).copy()
        for j in range(1, k):
            np.maximum(acc[:, j], acc[:, j - 1], out=acc[:, j])
        acc = acc[:, 1:].reshape(len(rows), size)
        grouped = _fold_max(acc.reshape(len(rows), n_groups, k), axis=2)
    else:
        # segmented running max down the rows: per-group offsets make one accumulate enough
        lift = (gid * (a + 1))[:, None]
        acc = (np.maximum.accumulate(best.astype(np.int32) + lift, axis=0) - lift)[rows]
        acc = acc.astype(np.int8)
        grouped = np.maximum.reduceat(acc, starts, axis=1)
    later = np.where(np.arange(size)[None, :] > rows[:, None], acc, 0)
    grouped = np.where(np.arange(n_groups)[None, :] < gid[rows][:, None], grouped, 0)
    for b in range(1, a + 1):
        top = int((np.count_nonzero(later >= b, axis=1) + np.count_nonzero(grouped >= b, axis=1)).max())
        if top > width[b]:
            width[b] = top


def enumerable_tuples(limit: int = 4096):
    """Every (q, (r_1..r_a)) with q >= 2 and q^{r_1+..+r_a} <= limit."""
    for q in range(2, limit + 1):
        total = 1
        while q ** total <= limit:
            yield from ((q, comp) for comp in _compositions(total))
            total += 1


def _compositions(total: int):
    """Ordered tuples of positive integers summing to ``total``."""
    for cuts in range(1 << (total - 1)):
        parts, cur = [], 1
        for i in range(total - 1):
            if cuts >> i & 1:
                parts.append(cur)
                cur = 1
            else:
                cur += 1
        parts.append(cur)
        yield tuple(parts)
