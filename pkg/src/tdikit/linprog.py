"""Exact two-phase simplex method over the rationals (Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import as_fraction, solve_linear

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPSolution:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    basis: tuple[int, ...] | None = None
    y: tuple[Fraction, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows  # list of lists of Fraction
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, j: int, obj: list[Fraction], objval: list[Fraction]):
        rows, rhs = self.rows, self.rhs
        pr = rows[r]
        inv = 1 / pr[j]
        if inv != 1:
            pr = rows[r] = [v * inv for v in pr]
            rhs[r] *= inv
        br = rhs[r]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[j]
            if f:
                rows[i] = [a - f * b if b else a for a, b in zip(row, pr)]
                rhs[i] -= f * br
        f = obj[j]
        if f:
            obj[:] = [a - f * b if b else a for a, b in zip(obj, pr)]
            objval[0] -= f * br
        self.basis[r] = j

    def optimize(self, obj, objval, allowed=None) -> bool:
        """Minimize with reduced-cost row ``obj``; False if unbounded."""
        rows, rhs, basis = self.rows, self.rhs, self.basis
        ncols = len(obj)
        while True:
            j = next((k for k in range(ncols) if obj[k] < 0 and (allowed is None or allowed[k])), None)
            if j is None:
                return True
            best = None
            for i, row in enumerate(rows):
                a = row[j]
                if a > 0:
                    ratio = rhs[i] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], j, obj, objval)


def simplex(A: Sequence[Sequence], b: Sequence, c: Sequence, basis: Sequence[int] | None = None) -> LPSolution:
    """Minimize c x subject to A x = b, x >= 0, exactly.

    ``basis`` optionally supplies a primal feasible starting basis, which
    skips phase one.  The returned ``y`` solves y A_B = c_B for the final
    basis B, i.e. it is the optimal dual (a vertex of {y : y A <= c}).
    """
    m = len(A)
    n = len(c)
    A = [[as_fraction(v) for v in row] for row in A]
    b = [as_fraction(v) for v in b]
    c = [as_fraction(v) for v in c]
    if basis is not None:
        tab = _warm_tableau(A, b, list(basis))
        if tab is None:
            raise ValueError("supplied basis is singular or infeasible")
    else:
        tab = _phase_one(A, b, n)
        if tab is None:
            return LPSolution(INFEASIBLE)
    obj = list(c)
    objval = [Fraction(0)]
    for i, j in enumerate(tab.basis):
        f = obj[j]
        if f:
            row = tab.rows[i]
            obj = [a - f * v if v else a for a, v in zip(obj, row)]
            objval[0] -= f * tab.rhs[i]
    if not tab.optimize(obj, objval):
        return LPSolution(UNBOUNDED, basis=tuple(tab.basis))
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        x[j] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(c, x) if xi), Fraction(0))
    B = tab.basis
    # duals: y A_B = c_B on the original (possibly redundant) rows
    AT = [[A[i][j] for i in range(m)] for j in B]
    y = solve_linear(AT, [c[j] for j in B]) if B else tuple(Fraction(0) for _ in range(m))
    return LPSolution(OPTIMAL, tuple(x), value, tuple(B), y)


def _warm_tableau(A, b, basis):
    m = len(A)
    if len(basis) != m:
        return None
    n = len(A[0]) if m else 0
    # [A_B | A | b] row-reduced gives B^{-1} A and B^{-1} b
    aug = [[A[i][j] for j in basis] + list(A[i]) + [b[i]] for i in range(m)]
    for col in range(m):
        p = next((i for i in range(col, m) if aug[i][col] != 0), None)
        if p is None:
            return None
        aug[col], aug[p] = aug[p], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(m):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[col])]
    rows = [r[m:m + n] for r in aug]
    rhs = [r[-1] for r in aug]
    if any(v < 0 for v in rhs):
        return None
    return _Tableau(rows, rhs, list(basis))


def _phase_one(A, b, n):
    m = len(A)
    rows, rhs = [], []
    for i in range(m):
        if b[i] < 0:
            rows.append([-v for v in A[i]] + [Fraction(int(k == i)) for k in range(m)])
            rhs.append(-b[i])
        else:
            rows.append(list(A[i]) + [Fraction(int(k == i)) for k in range(m)])
            rhs.append(b[i])
    tab = _Tableau(rows, rhs, list(range(n, n + m)))
    obj = [Fraction(0)] * n + [Fraction(1)] * m
    objval = [Fraction(0)]
    for i in range(m):
        obj = [a - v for a, v in zip(obj, rows[i])]
        objval[0] -= rhs[i]
    tab.optimize(obj, objval)
    if objval[0] != 0:
        return None
    # drive artificial variables out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            j = next((k for k in range(n) if tab.rows[i][k] != 0), None)
            if j is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, j, [Fraction(0)] * (n + m), [Fraction(0)])
        i += 1
    tab.rows = [r[:n] for r in tab.rows]
    return tab


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=(), maximize=False) -> LPSolution:
    """General-form exact LP: optimize c x s.t. A_ub x <= b_ub, A_eq x = b_eq.

    Variables are nonnegative except those whose indices are in ``free``.
    The solution's ``x`` is reported in the original variables; ``basis``
    and ``y`` refer to the internal standard form and are omitted.
    """
    n = len(c)
    free = set(free)
    A_ub = [list(r) for r in (A_ub or [])]
    b_ub = list(b_ub or [])
    A_eq = [list(r) for r in (A_eq or [])]
    b_eq = list(b_eq or [])
    # column map: each original var -> (plus col, minus col or None)
    cols = []
    k = 0
    for j in range(n):
        if j in free:
            cols.append((k, k + 1))
            k += 2
        else:
            cols.append((k, None))
            k += 1
    nslack = len(A_ub)
    total = k + nslack
    rows, rhs = [], []

    def expand(row):
        out = [Fraction(0)] * total
        for j, v in enumerate(row):
            if v:
                p, q = cols[j]
                out[p] = as_fraction(v)
                if q is not None:
                    out[q] = -as_fraction(v)
        return out

    for i, (row, bi) in enumerate(zip(A_ub, b_ub)):
        r = expand(row)
        r[k + i] = Fraction(1)
        rows.append(r)
        rhs.append(bi)
    for row, bi in zip(A_eq, b_eq):
        rows.append(expand(row))
        rhs.append(bi)
    sign = -1 if maximize else 1
    cost = expand([sign * as_fraction(v) for v in c])
    if not rows:
        # no constraints: bounded only if every cost pushes toward zero
        if any(cost[j] < 0 for j in range(total)):
            return LPSolution(UNBOUNDED)
        return LPSolution(OPTIMAL, tuple(Fraction(0) for _ in range(n)), Fraction(0))
    sol = simplex(rows, rhs, cost)
    if not sol.ok:
        return LPSolution(sol.status)
    x = []
    for p, q in cols:
        v = sol.x[p]
        if q is not None:
            v -= sol.x[q]
        x.append(v)
    value = sum((as_fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPSolution(OPTIMAL, tuple(x), value)
