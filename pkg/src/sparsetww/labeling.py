"""Closeness of sequences and path labels of functional orientations.

Two length-r sequences are *close* when deleting one entry from each leaves
equal sequences.  ``gamma_label`` maps every vertex of an out-degree-one
digraph to a sequence of r pairwise distinct symbols so that the two ends of
every arc get close sequences, and sequences sharing a symbol belong to
vertices at distance at most 3r - 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantError, PreconditionError
from .factorization import FunctionalOrientation


def is_close(s: Sequence, t: Sequence) -> bool:
    """One-deletion test in O(r).

    Deleting position i from s and j from t (i <= j) gives equal sequences iff
    s[:i] == t[:i], s[k+1] == t[k] for i <= k < j, and s[j+1:] == t[j+1:].
    """
    r = len(s)
    if len(t) != r:
        raise PreconditionError(f"cannot compare sequences of lengths {r} and {len(t)}")
    if r <= 1:
        return True
    lcp = 0
    while lcp < r and s[lcp] == t[lcp]:
        lcp += 1
    if lcp == r:
        return True
    lcs = 0
    while lcs < r and s[r - 1 - lcs] == t[r - 1 - lcs]:
        lcs += 1
    lo = min(lcp, r - 1)
    hi = max(r - 1 - lcs, 0)
    if lo >= hi:
        return True
    if all(s[k + 1] == t[k] for k in range(lo, hi)):
        return True
    return all(t[k + 1] == s[k] for k in range(lo, hi))


def close_or_equal_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise closeness for two (k, r) integer arrays (vectorised by deletion pairs)."""
    k, r = x.shape
    if r <= 1:
        return np.ones(k, dtype=bool)
    out = np.zeros(k, dtype=bool)
    for i in range(r):
        xi = np.delete(x, i, axis=1)
        for j in range(r):
            out |= np.all(xi == np.delete(y, j, axis=1), axis=1)
    return out


@dataclass(frozen=True)
class LabelingResult:
    """``labels[v]`` is the r-tuple of symbols of v.

    Symbols ``0..n-1`` are vertices; symbols ``>= n`` are padding, allocated
    per component (``padding[c]`` is the range used by component c, empty when
    the component needs none).
    """

    labels: tuple
    alphabet_size: int
    padding: tuple

    def as_array(self) -> np.ndarray:
        return np.array(self.labels, dtype=np.int64).reshape(len(self.labels), -1)


def _components(d: FunctionalOrientation) -> list[int]:
    """Weak-component id per vertex."""
    n = d.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, w in enumerate(d.out):
        if w is not None:
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[max(rv, rw)] = min(rv, rw)
    roots = [find(v) for v in range(n)]
    ids: dict[int, int] = {}
    return [ids.setdefault(x, len(ids)) for x in roots]


def _terminal_sets(d: FunctionalOrientation) -> list[list[int]]:
    """For each vertex, the cycle or sink its forward walk ends in (shared list objects)."""
    n = d.n
    term: list = [None] * n
    stamp = [-1] * n
    for start in range(n):
        if term[start] is not None:
            continue
        walk = []
        v = start
        while v is not None and term[v] is None and stamp[v] != start:
            stamp[v] = start
            walk.append(v)
            v = d.out[v]
        if v is None:
            target = [walk[-1]]
            # the sink itself
            term[walk[-1]] = target
        elif term[v] is not None:
            target = term[v]
        else:
            # closed a new cycle at v
            cyc = walk[walk.index(v):]
            target = cyc
            for x in cyc:
                term[x] = target
        for x in walk:
            if term[x] is None:
                term[x] = target
    return term


def gamma_label(d: FunctionalOrientation, r: int) -> LabelingResult:
    if r < 1:
        raise PreconditionError(f"label length must be >= 1, got {r}")
    n = d.n
    term = _terminal_sets(d)
    comp = _components(d)
    n_comp = max(comp, default=-1) + 1
    in_x = [False] * n
    small: dict[int, bool] = {}
    for v in range(n):
        xs = term[v]
        small[comp[v]] = len(xs) < r
        if v in xs:
            in_x[v] = True
    # padding ranges for components whose X is shorter than r
    padding = []
    nxt = n
    for c in range(n_comp):
        if small.get(c, False):
            padding.append(range(nxt, nxt + r))
            nxt += r
        else:
            padding.append(range(0))
    labels = []
    for v in range(n):
        c = comp[v]
        if not small[c]:
            path = []
            x = v
            while len(path) < r:
                path.append(x)
                x = d.out[x]
        else:
            path = []
            x = v
            while len(path) < r and not in_x[x]:
                path.append(x)
                x = d.out[x]
            path += list(padding[c][: r - len(path)])
        if len(set(path)) != r:
            raise InvariantError(f"label of vertex {v} repeats a symbol: {path}")
        labels.append(tuple(path))
    return LabelingResult(tuple(labels), nxt, tuple(padding))
