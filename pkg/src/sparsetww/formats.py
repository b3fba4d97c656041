"""Text formats.

Edge list::

    n m
    u v        (m lines, 0-indexed, written with u < v)

Contraction sequence::

    n k
    u v        (k lines; merge i creates vertex n + i)
"""

from __future__ import annotations

import os
from typing import TextIO

from .errors import GraphError, TwwError
from .graph import ContractionSequence, Graph


class FormatError(TwwError):
    pass


def _pairs(lines: list[str], what: str) -> tuple[int, int, list[tuple[int, int]]]:
    rows = [ln.split() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise FormatError(f"{what}: missing header line")
    try:
        head = [int(x) for x in rows[0]]
        body = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{what}: malformed line ({exc})") from None
    if len(head) != 2:
        raise FormatError(f"{what}: header must have exactly two integers")
    if any(len(r) != 2 for r in rows[1:]):
        raise FormatError(f"{what}: every body line must have exactly two integers")
    if len(body) != head[1]:
        raise FormatError(f"{what}: header announces {head[1]} lines, found {len(body)}")
    return head[0], head[1], body


def parse_edge_list(text: str) -> Graph:
    n, _, body = _pairs(text.splitlines(), "edge list")
    try:
        g = Graph.from_edges(n, body)
    except GraphError as exc:
        raise FormatError(f"edge list: {exc}") from None
    if g.m != len(body):
        raise FormatError("edge list contains duplicate edges")
    return g


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> ContractionSequence:
    n, _, body = _pairs(text.splitlines(), "contraction sequence")
    return ContractionSequence.of(n, body)


def format_sequence(s: ContractionSequence) -> str:
    lines = [f"{s.initial_n} {len(s.merges)}"] + [f"{u} {v}" for u, v in s.merges]
    return "\n".join(lines) + "\n"


def _read(path_or_file) -> str:
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file) as fh:
            return fh.read()
    return path_or_file.read()


def _write(path_or_file, text: str) -> None:
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file, "w") as fh:
            fh.write(text)
    else:
        path_or_file.write(text)


def read_edge_list(src: "str | os.PathLike | TextIO") -> Graph:
    return parse_edge_list(_read(src))


def write_edge_list(g: Graph, dst) -> None:
    _write(dst, format_edge_list(g))


def read_sequence(src) -> ContractionSequence:
    return parse_sequence(_read(src))


def write_sequence(s: ContractionSequence, dst) -> None:
    _write(dst, format_sequence(s))
