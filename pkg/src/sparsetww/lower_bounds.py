"""Balanced partitions from contraction sequences, and log-space counting bounds.

``extract_partition`` walks the partition chain of a contraction sequence and
peels off, one at a time, the first part that reaches n/K vertices outside the
parts already taken.  Each part taken this way has fewer than 2n/K vertices,
there are at most K parts, and the quotient graph is w-degenerate for a
w-contraction sequence.

The counting functions return natural logarithms so that bounds of the form
x^(dn/2) stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import PartitionError, PreconditionError
from .graph import ContractionSequence, Graph, Partition, quotient, replay_graphs, sequence_partitions

DEFAULT_C0 = 24000


@dataclass(frozen=True)
class PartitionChain:
    """``chain[i]`` is the partition after i merges (|chain[i]| = n - i)."""

    chain: tuple

    @classmethod
    def from_sequence(cls, g: Graph, s: ContractionSequence) -> "PartitionChain":
        _check_complete(g, s)
        return cls(tuple(sequence_partitions(g.n, s)))

    def check(self, g: Graph, s: ContractionSequence) -> None:
        """Sizes drop by one, each partition coarsens the last, quotients match the replay."""
        n = g.n
        if len(self.chain) != max(n, 1):
            raise PartitionError(f"chain has {len(self.chain)} partitions, expected {n}")
        for i, p in enumerate(self.chain):
            p.validate(n)
            if len(p) != n - i:
                raise PartitionError(f"partition {i} has {len(p)} parts, expected {n - i}")
            if i:
                owner = p.block_of()
                for blk in self.chain[i - 1].blocks:
                    if len({owner[v] for v in blk}) != 1:
                        raise PartitionError(f"partition {i} splits block {sorted(blk)}")
        for i, (h, _) in enumerate(replay_graphs(g, s)):
            if quotient(g, self.chain[i]) != h:
                raise PartitionError(f"quotient by partition {i} differs from the replayed graph")


def _check_complete(g: Graph, s: ContractionSequence) -> None:
    if s.initial_n != g.n:
        raise PreconditionError(f"sequence is for {s.initial_n} vertices, graph has {g.n}")
    s.check()
    if not s.is_complete:
        raise PreconditionError(f"sequence stops at {s.final_count} vertices")


def extract_partition(g: Graph, s: ContractionSequence, K: int) -> Partition:
    """At most K parts, each of size at most 2n/K, with a w-degenerate quotient."""
    n = g.n
    _check_complete(g, s)
    if not 1 <= K < n:
        raise PreconditionError(f"need 1 <= K < n = {n}, got K={K}")
    members: dict[int, list[int]] = {v: [v] for v in range(n)}
    # number of members not yet taken, per live part
    free: dict[int, int] = {v: 1 for v in range(n)}
    taken = [False] * n
    parts: list[frozenset] = []
    for i, (u, v) in enumerate(s.merges):
        w = n + i
        members[w] = members.pop(u) + members.pop(v)
        free[w] = free.pop(u) + free.pop(v)
        if free[w] * K >= n:
            part = frozenset(x for x in members[w] if not taken[x])
            for x in part:
                taken[x] = True
            parts.append(part)
            free[w] = 0
    rest = frozenset(v for v in range(n) if not taken[v])
    if rest:
        parts.append(rest)
    return Partition(tuple(parts))


@dataclass(frozen=True)
class CountingConstants:
    C1: float
    C0: int = DEFAULT_C0
    epsilon: float | None = None
    delta: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.C0 <= 0 or self.C1 <= 0:
            raise PreconditionError("C0 and C1 must be positive")

    @staticmethod
    def alpha_from_epsilon(eps: float) -> float:
        return 0.25 * math.exp(-4.0 / eps)

    def delta_from_alpha(self, alpha: float) -> float:
        return alpha ** 1.5 * 4.0 ** (-2.0 / alpha) / (12 * self.C0)


def _log(x) -> float:
    if x <= 0:
        raise PreconditionError(f"logarithm of non-positive value {x}")
    return math.log(x)


def count_stww_upper(n: int, m: int, eps, c: CountingConstants) -> float:
    """log of (C0·ε·n²/m)^m."""
    if m < 1:
        raise PreconditionError(f"need m >= 1, got {m}")
    return m * (_log(c.C0) + _log(eps) + 2 * _log(n) - _log(m))


@dataclass(frozen=True)
class StwwUpperReport:
    log_count: float
    w: int
    K: int


def stww_upper_report(n: int, m: int, eps, d, c: CountingConstants) -> StwwUpperReport:
    """The log count together with w = ⌊εd(n/log n)^e⌋ and K = ⌊d²n/(w log n)⌋.

    Pass d = 2m/n for the edge-count convention, or the mad for density-based
    callers; the two agree on regular graphs.
    """
    e = float(exponent(d))
    ln = _log(n)
    w = math.floor(float(eps) * float(d) * (n / ln) ** e)
    K = math.floor(float(d) ** 2 * n / (w * ln)) if w > 0 else 0
    return StwwUpperReport(count_stww_upper(n, m, eps, c), w, K)


def count_regular_lower(n: int, d: int, c: CountingConstants) -> float:
    """log of (C1·n/d)^(dn/2)."""
    if d < 1 or n < 2:
        raise PreconditionError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if (d * n) % 2:
        raise PreconditionError(f"dn must be even, got d={d}, n={n}")
    if d > math.log(n):
        raise PreconditionError(f"need d <= log n = {math.log(n):.3f}, got d={d}")
    return d * n / 2 * (_log(c.C1) + _log(n) - _log(d))


def _exact(x):
    return Fraction(x) if isinstance(x, (int, float, Rational)) else x


def probability_ratio(n: int, d, c: CountingConstants, eps=None) -> float:
    """log of (2·C0·ε/C1)^(dn/2); the ratio itself is formed exactly when inputs are rational."""
    eps = c.epsilon if eps is None else eps
    if eps is None:
        raise PreconditionError("epsilon must be given")
    ratio = 2 * _exact(c.C0) * _exact(eps) / _exact(c.C1)
    return d * n / 2 * _log(ratio)


def epsilon_for_ratio(c: CountingConstants, ratio=Fraction(2, 3)) -> Fraction:
    """The ε with 2·C0·ε/C1 = ratio, as an exact rational."""
    return Fraction(ratio) * Fraction(c.C1) / (2 * Fraction(c.C0))


def exponent(d) -> Fraction:
    """(d - 2)/(2d - 2), exact for rational d."""
    d = Fraction(d)
    if d <= 2:
        raise PreconditionError(f"need d > 2, got {d}")
    return (d - 2) / (2 * d - 2)


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: Fraction
    exponent: Fraction
    lower: float | None
    upper: float | None


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def bound_report(n: int, d, eps=None, C=None) -> BoundReport:
    """Exponent, and, for caller-supplied constants, the two sides of the width bound."""
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    e = exponent(d)
    ln = math.log(n)
    df = float(d)
    lower = upper = None
    if eps is not None:
        lower = _safe_exp(math.log(eps * df) + float(e) * ln - 0.5 * math.log(ln))
    if C is not None:
        if ln <= 1:
            raise PreconditionError("upper bound needs log log n > 0")
        upper = _safe_exp(float(e) * ln + C * (math.sqrt(ln) * math.log(ln) / df + math.log(df)))
    return BoundReport(n, Fraction(d), e, lower, upper)
