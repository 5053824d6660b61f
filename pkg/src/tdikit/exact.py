"""Exact integer/rational linear algebra.

Everything here works on Python ``int`` and :class:`fractions.Fraction`;
no floating point is ever produced.  Matrices are stored row-major as
tuples of tuples.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "Fraction",
    "IntegerMatrix",
    "as_fraction",
    "as_matrix",
    "determinant",
    "rank",
    "solve_linear",
    "solve_integer_system",
    "hermite_normal_form",
    "spans_full_lattice",
    "integer_kernel_basis",
    "lattice_contains",
    "dot",
    "format_rational",
    "parse_rational",
    "RankDeficientError",
]


class RankDeficientError(ValueError):
    """Raised when a matrix that must have full row rank does not."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


class IntegerMatrix:
    """Immutable d x n matrix of Python integers."""

    __slots__ = ("rows", "d", "n", "_cols")

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(_check_int(x)) for x in r) for r in rows)
        if not rows:
            raise ValueError("matrix needs at least one row")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged matrix rows")
        self.rows = rows
        self.d = len(rows)
        self.n = n
        self._cols = None

    @classmethod
    def from_columns(cls, cols: Iterable[Iterable[int]], d: int | None = None) -> "IntegerMatrix":
        cols = [tuple(c) for c in cols]
        if not cols:
            if d is None:
                raise ValueError("cannot infer row count of an empty column list")
            return _EmptyColumns(d)
        return cls(zip(*cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.d, self.n

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        if self._cols is None:
            self._cols = tuple(zip(*self.rows)) if self.n else ()
        return self._cols

    def column(self, j: int) -> tuple[int, ...]:
        return self.columns[j]

    def submatrix(self, cols: Iterable[int]) -> "IntegerMatrix":
        cols = list(cols)
        if not cols:
            return _EmptyColumns(self.d)
        return IntegerMatrix(tuple(r[j] for j in cols) for r in self.rows)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.columns)

    def apply(self, x: Sequence) -> tuple:
        """Return the product M x."""
        return tuple(dot(r, x) for r in self.rows)

    def left_apply(self, y: Sequence) -> tuple:
        """Return the product y M."""
        return tuple(dot(y, col) for col in self.columns)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.n != other.d:
            raise ValueError("shape mismatch")
        ocols = other.columns
        return IntegerMatrix([[dot(r, c) for c in ocols] for r in self.rows])

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerMatrix) and self.rows == other.rows and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.rows, self.n))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()!r})"


class _EmptyColumns(IntegerMatrix):
    """A d x 0 matrix (the configuration of the empty cell)."""

    def __init__(self, d: int):
        self.rows = tuple(() for _ in range(d))
        self.d = d
        self.n = 0
        self._cols = ()


def _check_int(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, str):
        return int(x)
    raise TypeError(f"integer matrix entry expected, got {x!r}")


def as_matrix(M) -> IntegerMatrix:
    return M if isinstance(M, IntegerMatrix) else IntegerMatrix(M)


def _rows(M) -> list[list]:
    if isinstance(M, IntegerMatrix):
        return [list(r) for r in M.rows]
    return [list(r) for r in M]


def determinant(M) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    a = _rows(M)
    k = len(a)
    if any(len(r) != k for r in a):
        raise ValueError("determinant of a non-square matrix")
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[i][i]
        ri = a[i]
        for r in range(i + 1, k):
            rr = a[r]
            f = rr[i]
            for j in range(i + 1, k):
                rr[j] = (rr[j] * piv - ri[j] * f) // prev
            rr[i] = 0
        prev = piv
    return sign * a[k - 1][k - 1]


def rank(M) -> int:
    a = [[as_fraction(x) for x in r] for r in _rows(M)]
    return _row_reduce(a)[1]


def _row_reduce(a: list[list[Fraction]]):
    """In-place reduced row echelon form; returns (pivot columns, rank)."""
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][col] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        inv = 1 / pr[col]
        if inv != 1:
            a[r] = pr = [x * inv for x in pr]
        for i in range(m):
            if i != r:
                f = a[i][col]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], pr)]
        pivots.append(col)
        r += 1
    return pivots, r


def solve_linear(M, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Some exact solution x of M x = rhs, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    rows = _rows(M)
    if len(rhs) != len(rows):
        raise ValueError("right-hand side length mismatch")
    n = len(rows[0]) if rows else 0
    aug = [[as_fraction(x) for x in r] + [as_fraction(b)] for r, b in zip(rows, rhs)]
    pivots, r = _row_reduce(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return tuple(x)


def solve_integer_system(M, rhs: Sequence[int]) -> tuple[list[int], int] | None:
    """Solve a square nonsingular integer system with integer right-hand side.

    Returns ``(numerators, denominator)`` with ``x = numerators / denominator``
    and denominator > 0, or ``None`` when M is singular.  Pure integer
    (Bareiss) arithmetic; this is the hot path of basis enumeration.
    """
    a = _rows(M)
    k = len(a)
    for i, b in enumerate(rhs):
        a[i].append(b)
    prev = 1
    for i in range(k):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    break
            else:
                return None
        piv = a[i][i]
        ri = a[i]
        for r in range(k):
            if r == i:
                continue
            rr = a[r]
            f = rr[i]
            if r > i:
                for j in range(i + 1, k + 1):
                    rr[j] = (rr[j] * piv - ri[j] * f) // prev
            else:
                for j in range(i + 1, k + 1):
                    rr[j] = (rr[j] * piv - ri[j] * f) // prev
                # rows above the pivot are scaled by piv/prev; keep their
                # diagonal consistent with that scaling
                rr[r] = rr[r] * piv // prev
            rr[i] = 0
        prev = piv
    det = a[k - 1][k - 1] if k else 1
    nums = [a[i][k] for i in range(k)]
    if det < 0:
        det = -det
        nums = [-x for x in nums]
    return nums, det


def hermite_normal_form(M) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Column Hermite normal form: returns (H, U) with M U = H and det U = +-1.

    H is lower echelon: the pivot of the k-th nonzero column sits in a row
    strictly below the previous pivot, pivots are positive, entries to the
    right of a pivot are zero and entries to its left lie in [0, pivot).
    Trailing columns are zero; the matching columns of U span the integer
    kernel of M.
    """
    a = _rows(M)
    d = len(a)
    n = len(a[0]) if d else 0
    # work on columns: cols[j] is column j of M, ucols[j] column j of U
    cols = [[a[i][j] for i in range(d)] for j in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]

    def combine(j, k, p, q, r, s):
        # (col_j, col_k) <- (p col_j + q col_k, r col_j + s col_k)
        cj, ck = cols[j], cols[k]
        cols[j] = [p * x + q * y for x, y in zip(cj, ck)]
        cols[k] = [r * x + s * y for x, y in zip(cj, ck)]
        uj, uk = ucols[j], ucols[k]
        ucols[j] = [p * x + q * y for x, y in zip(uj, uk)]
        ucols[k] = [r * x + s * y for x, y in zip(uj, uk)]

    pivot_rows = []
    k = 0
    for i in range(d):
        if k == n:
            break
        for j in range(k + 1, n):
            x, y = cols[k][i], cols[j][i]
            if y == 0:
                continue
            g, p, q = _xgcd(x, y)
            # [p q; -y/g x/g] has determinant 1
            combine(k, j, p, q, -y // g, x // g)
        if cols[k][i] == 0:
            continue
        if cols[k][i] < 0:
            cols[k] = [-x for x in cols[k]]
            ucols[k] = [-x for x in ucols[k]]
        piv = cols[k][i]
        for j in range(k):
            f = cols[j][i] // piv
            if f:
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[k])]
                ucols[j] = [x - f * y for x, y in zip(ucols[j], ucols[k])]
        pivot_rows.append(i)
        k += 1
    H = IntegerMatrix([[cols[j][i] for j in range(n)] for i in range(d)])
    U = IntegerMatrix([[ucols[j][i] for j in range(n)] for i in range(n)])
    return H, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, p, q) with p a + q b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_pivots(H: IntegerMatrix) -> list[tuple[int, int]]:
    """(row, column) positions of the pivots of a column HNF."""
    out = []
    for j, col in enumerate(H.columns):
        r = next((i for i, x in enumerate(col) if x != 0), None)
        if r is None:
            break
        out.append((r, j))
    return out


def spans_full_lattice(M) -> bool:
    """True iff the integer span of the columns of M is all of Z^d."""
    M = as_matrix(M)
    if M.n == 0 or rank(M) < M.d:
        raise RankDeficientError("matrix does not have full row rank")
    H, _ = hermite_normal_form(M)
    return all(H.rows[i][i] == 1 for i in range(M.d))


def integer_kernel_basis(M) -> list[tuple[int, ...]]:
    """A basis of the lattice {x in Z^n : M x = 0}."""
    M = as_matrix(M)
    H, U = hermite_normal_form(M)
    r = len(_hnf_pivots(H))
    return [U.column(j) for j in range(r, M.n)]


def lattice_contains(M, p: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients x with M x = p, or ``None`` if p is not in Z M."""
    M = as_matrix(M)
    if M.n == 0:
        return () if all(v == 0 for v in p) else None
    H, U = hermite_normal_form(M)
    piv = _hnf_pivots(H)
    resid = list(p)
    coef = [0] * M.n
    for r, j in piv:
        # rows above r are already cleared
        q, rem = divmod(resid[r], H.rows[r][j])
        if rem:
            return None
        coef[j] = q
        if q:
            col = H.column(j)
            resid = [x - q * y for x, y in zip(resid, col)]
    if any(resid):
        return None
    return tuple(dot(U.rows[i], coef) for i in range(M.n))


def minor_gcd(M) -> int:
    """gcd of all maximal minors (brute force; small matrices only)."""
    M = as_matrix(M)
    g = 0
    for cols in combinations(range(M.n), M.d):
        g = gcd(g, determinant(M.submatrix(cols).rows))
    return g
