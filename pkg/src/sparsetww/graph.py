"""Simple undirected graphs, partitions, quotients and contraction sequences.

Vertices are the integers ``0..n-1``.  A contraction sequence is a list of
merges ``(u, v)``; the ``i``-th merge creates the fresh vertex ``n + i``
whose neighbourhood is the union of the neighbourhoods of ``u`` and ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GraphError, PartitionError, SequenceError


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} has an endpoint outside 0..{self.n - 1}")
            if u > v:
                raise GraphError(f"edge {e} is not canonical (u < v)")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, canonicalising pairs and dropping duplicates.

        Loops are rejected rather than silently dropped.
        """
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            canon.add(_edge(u, v))
        return cls(n, frozenset(canon))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.adj)

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` relabelled in ascending order.

        Returns the subgraph and the list mapping new ids to old ids.
        """
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        edges = [(new_of[u], new_of[v]) for u, v in self.edges if u in new_of and v in new_of]
        return Graph.from_edges(len(old), edges), old

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def distances_from(self, source: int, limit: int | None = None) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if limit is not None and du >= limit:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = list(self.distances_from(s))
            for v in comp:
                seen[v] = True
            comps.append(sorted(comp))
        return comps


@dataclass(frozen=True)
class Partition:
    blocks: tuple[frozenset, ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(tuple(frozenset(b) for b in blocks))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple(frozenset((v,)) for v in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Group vertices by label; blocks ordered by first occurrence."""
        groups: dict = {}
        for v, lab in enumerate(labels):
            groups.setdefault(lab, []).append(v)
        return cls.of(groups.values())

    def __len__(self) -> int:
        return len(self.blocks)

    def validate(self, n: int) -> None:
        owner: dict[int, int] = {}
        for i, block in enumerate(self.blocks):
            if not block:
                raise PartitionError(f"block {i} is empty")
            for v in block:
                if not 0 <= v < n:
                    raise PartitionError(f"vertex {v} in block {i} is outside 0..{n - 1}")
                if v in owner:
                    raise PartitionError(f"vertex {v} lies in blocks {owner[v]} and {i}")
                owner[v] = i
        for v in range(n):
            if v not in owner:
                raise PartitionError(f"vertex {v} is not covered by any block")

    def block_of(self) -> dict[int, int]:
        return {v: i for i, block in enumerate(self.blocks) for v in block}

    def restrict(self, removed: Iterable[int]) -> "Partition":
        """Restriction to the complement of ``removed``, dropping emptied blocks."""
        gone = set(removed)
        kept = (b - gone for b in self.blocks)
        return Partition(tuple(b for b in kept if b))


@dataclass(frozen=True)
class ContractionSequence:
    initial_n: int
    merges: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, initial_n: int, merges: Iterable[Sequence[int]]) -> "ContractionSequence":
        return cls(initial_n, tuple((int(u), int(v)) for u, v in merges))

    def __len__(self) -> int:
        return len(self.merges)

    @property
    def final_count(self) -> int:
        return self.initial_n - len(self.merges)

    @property
    def is_complete(self) -> bool:
        return self.initial_n <= 1 and not self.merges or self.final_count == 1

    def check(self) -> None:
        """Raise SequenceError unless every merge joins two distinct live vertices."""
        if len(self.merges) > max(self.initial_n - 1, 0):
            raise SequenceError(
                f"{len(self.merges)} merges exceed initial_n - 1 = {self.initial_n - 1}",
                step=max(self.initial_n - 1, 0),
            )
        dead: set[int] = set()
        for i, (u, v) in enumerate(self.merges):
            created = self.initial_n + i
            for x in (u, v):
                if not 0 <= x < created:
                    raise SequenceError(f"step {i}: vertex id {x} does not exist yet", step=i)
                if x in dead:
                    raise SequenceError(f"step {i}: vertex id {x} was already merged away", step=i)
            if u == v:
                raise SequenceError(f"step {i}: cannot merge vertex {u} with itself", step=i)
            dead.add(u)
            dead.add(v)

    def then(self, other: "ContractionSequence", live_ids: Sequence[int]) -> "ContractionSequence":
        """Append ``other``, which acts on the graph left after ``self``.

        ``live_ids[j]`` is the id (in this sequence's numbering) of vertex
        ``j`` of the graph that ``other`` starts from.
        """
        if len(live_ids) != other.initial_n:
            raise SequenceError("live_ids must list one id per start vertex of the suffix")
        offset = self.initial_n + len(self.merges)

        def tr(x: int) -> int:
            return live_ids[x] if x < other.initial_n else offset + (x - other.initial_n)

        merged = self.merges + tuple((tr(u), tr(v)) for u, v in other.merges)
        return ContractionSequence(self.initial_n, merged)

    def live_after(self) -> list[int]:
        """Live vertex ids after all merges, ascending."""
        dead = {x for pair in self.merges for x in pair}
        total = self.initial_n + len(self.merges)
        return [x for x in range(total) if x not in dead]


def quotient(g: Graph, p: Partition) -> Graph:
    """G/P: block i adjacent to block j iff some edge of g crosses them."""
    p.validate(g.n)
    owner = p.block_of()
    edges = set()
    for u, v in g.edges:
        bu, bv = owner[u], owner[v]
        if bu != bv:
            edges.add(_edge(bu, bv))
    return Graph(len(p.blocks), frozenset(edges))


def power(g: Graph, l: int) -> Graph:
    """u ~ v iff 1 <= dist(u, v) <= l."""
    if l < 1:
        raise GraphError(f"power exponent must be >= 1, got {l}")
    edges = []
    for u in range(g.n):
        for v, d in g.distances_from(u, limit=l).items():
            if u < v and d >= 1:
                edges.append((u, v))
    return Graph(g.n, frozenset(edges))


def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Degeneracy and a min-degree elimination ordering (bucket queue)."""
    n = g.n
    if n == 0:
        return 0, []
    deg = list(g.degrees)
    maxd = max(deg)
    buckets: list[set] = [set() for _ in range(maxd + 1)]
    for v, d in enumerate(deg):
        buckets[d].add(v)
    removed = [False] * n
    order = []
    k = 0
    low = 0
    for _ in range(n):
        while not buckets[low]:
            low += 1
        v = min(buckets[low])
        buckets[low].discard(v)
        removed[v] = True
        order.append(v)
        k = max(k, low)
        for w in g.adj[v]:
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
        low = max(low - 1, 0)
    return k, order


@dataclass(frozen=True)
class ReplayResult:
    width: int
    trajectory: tuple[int, ...]


class _Contractor:
    """Mutable merge state used by replay; tracks the max degree in O(deg) per merge."""

    def __init__(self, g: Graph, total: int):
        self.nbrs: list = [set(s) for s in g.adj] + [None] * (total - g.n)
        self.hist = [0] * (max(g.n, 1) + 1)
        for d in g.degrees:
            self.hist[d] += 1
        self.top = g.max_degree
        self.next_id = g.n

    def _move(self, old: int, new: int) -> None:
        self.hist[old] -= 1
        self.hist[new] += 1

    def merge(self, u: int, v: int) -> int:
        nu, nv = self.nbrs[u], self.nbrs[v]
        w = self.next_id
        self.next_id += 1
        self.hist[len(nu)] -= 1
        self.hist[len(nv)] -= 1
        union = nu | nv
        union.discard(u)
        union.discard(v)
        for x in union:
            nx_ = self.nbrs[x]
            before = len(nx_)
            nx_.discard(u)
            nx_.discard(v)
            nx_.add(w)
            if len(nx_) != before:
                self._move(before, len(nx_))
        self.nbrs[u] = self.nbrs[v] = None
        self.nbrs[w] = union
        self.hist[len(union)] += 1
        if len(union) > self.top:
            self.top = len(union)
        while self.top > 0 and self.hist[self.top] == 0:
            self.top -= 1
        return w


def replay(g: Graph, s: ContractionSequence) -> ReplayResult:
    """Width (max over all intermediate graphs of the max degree) and per-graph trajectory.

    ``trajectory[0]`` is Δ(g); ``trajectory[i]`` is Δ after ``i`` merges.
    """
    if s.initial_n != g.n:
        raise SequenceError(f"sequence is for {s.initial_n} vertices, graph has {g.n}")
    s.check()
    state = _Contractor(g, g.n + len(s.merges))
    traj = [state.top]
    for u, v in s.merges:
        state.merge(u, v)
        traj.append(state.top)
    return ReplayResult(max(traj), tuple(traj))


def replay_graphs(g: Graph, s: ContractionSequence) -> Iterator[tuple[Graph, list[int]]]:
    """Yield every intermediate graph (copy per step) with its live-id list.

    Vertex ``j`` of the yielded graph is live id ``ids[j]``.  Meant for small
    inputs and tests.
    """
    s.check()
    nbrs = {v: set(g.adj[v]) for v in range(g.n)}

    def snapshot():
        ids = sorted(nbrs)
        pos = {x: j for j, x in enumerate(ids)}
        edges = [(pos[x], pos[y]) for x in ids for y in nbrs[x] if x < y]
        return Graph.from_edges(len(ids), edges), ids

    yield snapshot()
    for i, (u, v) in enumerate(s.merges):
        w = s.initial_n + i
        union = (nbrs.pop(u) | nbrs.pop(v)) - {u, v}
        for x in union:
            nbrs[x] -= {u, v}
            nbrs[x].add(w)
        nbrs[w] = union
        yield snapshot()


def sequence_partitions(n: int, s: ContractionSequence) -> list[Partition]:
    """Partitions of the original vertices after each prefix of ``s`` (len(s)+1 of them).

    Blocks are listed in ascending order of the live id that carries them.
    """
    s.check()
    members: dict[int, list[int]] = {v: [v] for v in range(n)}
    out = [Partition.singletons(n)]
    for i, (u, v) in enumerate(s.merges):
        members[n + i] = members.pop(u) + members.pop(v)
        out.append(Partition.of(members[x] for x in sorted(members)))
    return out
