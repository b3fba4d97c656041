"""Cover a graph by ``a`` functional orientations so every edge is used at least ``b`` times.

The construction matches the slots ``E x [b]`` into ``V x [a]`` (an edge slot is
matched to one of its endpoints together with a colour ``i``), then reads off
orientation ``i`` as the arcs ``u -> v`` whose slot went to ``(u, i)``.  Hall's
condition holds whenever ``a/b >= mad/2``.

A raw matching may give both slots of one edge the same colour (``u -> v`` and
``v -> u`` in a single orientation), which would leave that edge covered fewer
than ``b`` times.  Such clashes are removed by alternating-path recolouring,
exactly as in König's edge-colouring argument for bipartite graphs.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .density import denser_subgraph, density_of, mad_exact
from .errors import InvariantError, PreconditionError
from .graph import Graph

log = logging.getLogger(__name__)

_INF = float("inf")


@dataclass(frozen=True)
class FunctionalOrientation:
    """Digraph with out-degree at most one; ``out[v]`` is v's out-neighbour or None."""

    n: int
    out: tuple

    def __post_init__(self):
        if len(self.out) != self.n:
            raise PreconditionError("out map must have one entry per vertex")
        for v, w in enumerate(self.out):
            if w is None:
                continue
            if not 0 <= w < self.n or w == v:
                raise PreconditionError(f"invalid arc {v} -> {w}")
            if self.out[w] == v:
                raise PreconditionError(f"arcs {v} -> {w} and {w} -> {v} share an underlying edge")

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "FunctionalOrientation":
        out: list = [None] * n
        for u, v in arcs:
            if out[u] is not None:
                raise PreconditionError(f"vertex {u} has two out-arcs")
            out[u] = v
        return cls(n, tuple(out))

    def arcs(self) -> list[tuple[int, int]]:
        return [(v, w) for v, w in enumerate(self.out) if w is not None]

    def underlying(self) -> Graph:
        return Graph.from_edges(self.n, self.arcs())


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching; returns ``match_left[u]`` (right index or -1).

    Neighbour lists are scanned in the given order, which makes the result
    deterministic.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    # greedy warm start
    for u in range(n_left):
        for w in adj[u]:
            if match_r[w] == -1:
                match_l[u], match_r[w] = w, u
                break
    dist = [0.0] * n_left
    while True:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                x = match_r[w]
                if x == -1:
                    found = True
                elif dist[x] == _INF:
                    dist[x] = dist[u] + 1
                    queue.append(x)
        if not found:
            return match_l
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            # iterative layered DFS
            stack = [root]
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                advanced = False
                while ptr[u] < len(nbrs):
                    w = nbrs[ptr[u]]
                    ptr[u] += 1
                    x = match_r[w]
                    if x == -1:
                        # augment along the stack
                        for depth in range(len(stack) - 1, -1, -1):
                            y = stack[depth]
                            prev = match_l[y]
                            match_l[y], match_r[w] = w, y
                            w = prev
                        stack = []
                        advanced = True
                        break
                    if dist[x] == dist[u] + 1:
                        stack.append(x)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = _INF
                    stack.pop()


def check_precondition(g: Graph, a: int, b: int) -> None:
    if not (a >= b >= 1):
        raise PreconditionError(f"need a >= b >= 1, got a={a}, b={b}")
    witness = denser_subgraph(g, Fraction(2 * a, b))
    if witness is not None:
        raise PreconditionError(
            f"a/b = {Fraction(a, b)} < mad/2: the set {sorted(witness)} has average degree "
            f"{density_of(g, witness)} > 2a/b = {Fraction(2 * a, b)}"
        )


def decompose(g: Graph, a: int, b: int) -> list[FunctionalOrientation]:
    """``a`` functional orientations whose underlying graphs cover each edge >= b times."""
    check_precondition(g, a, b)
    edges = g.sorted_edges()
    # left = edge slots (e, j) -> index e*b + j ; right = (v, i) -> index v*a + i
    adj = []
    for u, v in edges:
        choices = [u * a + i for i in range(a)] + [v * a + i for i in range(a)]
        adj.extend([choices] * b)
    match = hopcroft_karp(adj, g.n * a)
    if any(x == -1 for x in match):
        raise InvariantError("matching does not saturate E x [b] although a/b >= mad/2")
    tail = [x // a for x in match]
    colour = [x % a for x in match]
    repairs = _repair_clashes(edges, b, a, tail, colour)
    if repairs:
        log.debug("recoloured %d slot clashes", repairs)
    outs: list[list] = [[None] * g.n for _ in range(a)]
    for k, (u, v) in enumerate(edges):
        for j in range(b):
            s = k * b + j
            t, c = tail[s], colour[s]
            head = v if t == u else u
            if outs[c][t] is not None:
                raise InvariantError(f"vertex {t} received two out-arcs in orientation {c}")
            outs[c][t] = head
    return [FunctionalOrientation(g.n, tuple(o)) for o in outs]


def _repair_clashes(edges, b: int, a: int, tail: list[int], colour: list[int]) -> int:
    """Recolour slots so the b slots of each edge get distinct colours.

    Slots are coloured one at a time keeping a proper partial colouring of the
    bipartite multigraph (vertices | edges, one link per slot).  A slot keeps
    its matching colour when that colour is free at both ends; otherwise the
    standard König alternating-path swap frees a colour.  Vertex degree <= a
    (each (v, i) was matched once) and edge degree b <= a, so a colours
    suffice.  Returns the number of slots whose colour changed.
    """
    if b == 1:
        return 0
    original = list(colour)
    at_vertex: dict[tuple[int, int], int] = {}
    at_edge: dict[tuple[int, int], int] = {}

    def paint(s: int, c: int) -> None:
        colour[s] = c
        at_vertex[(tail[s], c)] = s
        at_edge[(s // b, c)] = s

    def unpaint(s: int) -> None:
        del at_vertex[(tail[s], colour[s])]
        del at_edge[(s // b, colour[s])]

    for s in range(len(tail)):
        v, k = tail[s], s // b
        pref = original[s]
        if (v, pref) not in at_vertex and (k, pref) not in at_edge:
            paint(s, pref)
            continue
        alpha = next(c for c in range(a) if (v, c) not in at_vertex)
        beta = next(c for c in range(a) if (k, c) not in at_edge)
        if (k, alpha) not in at_edge:
            paint(s, alpha)
            continue
        if (v, beta) in at_vertex:
            # swap alpha/beta along the path v -beta- e -alpha- u -beta- ...
            path = []
            node = v
            while True:
                x = at_vertex.get((node, beta))
                if x is None:
                    break
                path.append(x)
                y = at_edge.get((x // b, alpha))
                if y is None:
                    break
                path.append(y)
                node = tail[y]
            flipped = [(x, alpha if colour[x] == beta else beta) for x in path]
            for x in path:
                unpaint(x)
            for x, c in flipped:
                paint(x, c)
        if (v, beta) in at_vertex or (k, beta) in at_edge:
            raise InvariantError("alternating-path swap failed to free a colour")
        paint(s, beta)
    for k in range(len(edges)):
        if len({colour[s] for s in range(k * b, (k + 1) * b)}) != b:
            raise InvariantError(f"edge {edges[k]} still has clashing slot colours")
    return sum(1 for s in range(len(tail)) if colour[s] != original[s])


def minimal_ab(g: Graph) -> tuple[int, int]:
    """Smallest feasible pair: b = 1 and a = max(1, ceil(mad/2))."""
    d, _ = mad_exact(g)
    return max(1, math.ceil(d / 2)), 1
