"""Plain-text formats for matrices, systems and graphs.

Matrix file::

    # comment
    d n
    a11 ... a1n
    ...
    ad1 ... adn

A system file is a matrix file followed by one line with the n cost
entries (integers or p/q).  Graph files are DIMACS-like: ``p edge d m``
followed by ``e u v`` lines with 1-based vertices; ``c`` lines are comments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exact import format_rational, parse_rational


class InputError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}:"
        super().__init__(f"{where} {message}" if where else message)

    def at(self, source: str) -> "InputError":
        """The same error, tagged with the file it came from."""
        return InputError(self.message, self.line, source)


def _content_lines(text: str, comment: str = "#"):
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0].strip()
        if line:
            yield k, line


def _ints(tokens, k):
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise InputError(f"expected an integer, got {t!r}", k) from None
    return out


def _read_matrix(lines):
    try:
        k, head = next(lines)
    except StopIteration:
        raise InputError("empty input") from None
    dims = head.split()
    if len(dims) != 2:
        raise InputError("header must be 'd n'", k)
    d, n = _ints(dims, k)
    if d <= 0 or n <= 0:
        raise InputError("dimensions must be positive", k)
    rows = []
    last = k
    for _ in range(d):
        try:
            k, line = next(lines)
        except StopIteration:
            raise InputError(f"expected {d} matrix rows, found {len(rows)}", last) from None
        row = _ints(line.split(), k)
        if len(row) != n:
            raise InputError(f"row has {len(row)} entries, expected {n}", k)
        rows.append(row)
        last = k
    return rows, n, last


def parse_matrix(text: str) -> list[list[int]]:
    lines = _content_lines(text)
    rows, _, _ = _read_matrix(lines)
    for k, _line in lines:
        raise InputError("unexpected trailing content", k)
    return rows


def parse_system(text: str) -> tuple[list[list[int]], list[Fraction]]:
    lines = _content_lines(text)
    rows, n, last = _read_matrix(lines)
    try:
        k, line = next(lines)
    except StopIteration:
        raise InputError("missing cost vector line", last) from None
    cost = []
    for t in line.split():
        try:
            cost.append(parse_rational(t))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"expected a rational, got {t!r}", k) from None
    if len(cost) != n:
        raise InputError(f"cost vector has {len(cost)} entries, expected {n}", k)
    for k, _line in lines:
        raise InputError("unexpected trailing content", k)
    return rows, cost


def parse_vector(text: str) -> list[int]:
    toks = text.replace(",", " ").split()
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


def parse_graph(text: str):
    """Returns (d, edges) with 0-based vertices."""
    d = None
    m = None
    edges = []
    for k, line in _content_lines(text, comment="\0"):
        tok = line.split()
        if tok[0] == "c":
            continue
        if tok[0] == "p":
            if d is not None:
                raise InputError("duplicate 'p' line", k)
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise InputError("header must be 'p edge d m'", k)
            d, m = _ints(tok[2:], k)
            if d < 0 or m < 0:
                raise InputError("negative size in header", k)
            continue
        if tok[0] == "e":
            if d is None:
                raise InputError("edge before 'p' line", k)
            if len(tok) != 3:
                raise InputError("edge line must be 'e u v'", k)
            u, v = _ints(tok[1:], k)
            if not (1 <= u <= d and 1 <= v <= d):
                raise InputError(f"vertex out of range 1..{d}", k)
            if u == v:
                raise InputError("loops are not allowed", k)
            edges.append((u - 1, v - 1))
            continue
        raise InputError(f"unknown line type {tok[0]!r}", k)
    if d is None:
        raise InputError("missing 'p edge d m' line")
    if len(edges) != m:
        raise InputError(f"header announces {m} edges, found {len(edges)}")
    return d, edges


def format_matrix(rows: Sequence[Sequence[int]]) -> str:
    d = len(rows)
    n = len(rows[0]) if rows else 0
    out = [f"{d} {n}"]
    out += [" ".join(str(v) for v in r) for r in rows]
    return "\n".join(out) + "\n"


def format_system(rows: Sequence[Sequence[int]], cost: Iterable) -> str:
    return format_matrix(rows) + " ".join(format_rational(Fraction(v)) for v in cost) + "\n"


def format_graph(d: int, edges: Iterable[Sequence[int]]) -> str:
    edges = sorted(tuple(sorted(e)) for e in edges)
    out = [f"p edge {d} {len(edges)}"] + [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(out) + "\n"
