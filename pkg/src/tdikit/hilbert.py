"""Hilbert bases of rational cones and semigroup membership."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import floor, lcm
from typing import Iterable, Sequence

from .exact import (
    IntegerMatrix,
    as_matrix,
    determinant,
    dot,
    hermite_normal_form,
    integer_kernel_basis,
    lattice_contains,
    rank,
    solve_integer_system,
)
from .linprog import linprog


class NonPointedError(ValueError):
    """Raised by :func:`hilbert_basis` for cones containing a line."""


@dataclass(frozen=True)
class HilbertVerdict:
    is_basis: bool
    witness: tuple[int, ...] | None = None
    minimal_basis: list[tuple[int, ...]] | None = None


def _positive_kernel_support(cols: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], tuple[int, ...] | None]:
    """Union J of supports of x >= 0 with sum x_j b_j = 0, plus an integral
    such x that is >= 1 on all of J."""
    m = len(cols)
    if m == 0:
        return (), None
    d = len(cols[0])
    # variables x (m), t (m): max sum t, sum x_j b_j = 0, t_j <= x_j, t_j <= 1
    A_eq = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(0)] * m for i in range(d)]
    A_ub, b_ub = [], []
    for j in range(m):
        row = [Fraction(0)] * (2 * m)
        row[m + j], row[j] = Fraction(1), Fraction(-1)
        A_ub.append(row)
        b_ub.append(0)
        row = [Fraction(0)] * (2 * m)
        row[m + j] = Fraction(1)
        A_ub.append(row)
        b_ub.append(1)
    sol = linprog([0] * m + [1] * m, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[0] * d, maximize=True)
    J = tuple(j for j in range(m) if sol.x[m + j] > 0)
    if not J:
        return (), None
    x = sol.x[:m]
    L = lcm(*(v.denominator for v in x))
    xi = [int(v * L) for v in x]
    return J, tuple(xi)


class Cone:
    """cone(B) for the columns of B, with lattice bookkeeping.

    Points are handled in coordinates of the saturated lattice
    span(B) ∩ Z^d, so everything downstream is full-dimensional.
    """

    def __init__(self, B):
        if not isinstance(B, IntegerMatrix):
            B = IntegerMatrix(B)
        self.B = B
        self.d = B.d
        self.gens = B.columns
        if any(all(v == 0 for v in g) for g in self.gens):
            raise ValueError("cone generators must be nonzero")
        self.m = len(self.gens)
        self.r = rank(B) if self.m else 0
        self._setup_lattice()
        self.J, self.kernel_vec = _positive_kernel_support(self.local)
        self.pointed = not self.J
        self._w = None
        self._bases = None

    # lattice coordinates ------------------------------------------------
    def _setup_lattice(self):
        d, r = self.d, self.r
        if r == d:
            self.basis = None
            self.local = list(self.gens)
            return
        if r == 0:
            self.basis = IntegerMatrix([[]] * d) if d else None
            self.local = [() for _ in self.gens]
            return
        # saturated lattice = integer kernel of the orthogonal complement
        perp = integer_kernel_basis(IntegerMatrix(list(self.gens)))
        sat = integer_kernel_basis(IntegerMatrix(perp))
        self.basis = IntegerMatrix.from_columns(sat, d)
        self.local = [lattice_contains(self.basis, g) for g in self.gens]

    def to_local(self, p: Sequence[int]) -> tuple[int, ...] | None:
        if self.basis is None:
            return tuple(p)
        if self.r == 0:
            return () if not any(p) else None
        return lattice_contains(self.basis, p)

    def to_ambient(self, q: Sequence[int]) -> tuple[int, ...]:
        if self.basis is None:
            return tuple(q)
        if self.r == 0:
            return (0,) * self.d
        return self.basis.apply(q)

    # simplicial cover -----------------------------------------------------
    def bases(self):
        """Every linearly independent r-subset with its exact inverse data."""
        if self._bases is None:
            out = []
            loc = self.local
            for tau in combinations(range(self.m), self.r):
                M = [[loc[j][i] for j in tau] for i in range(self.r)]
                det = determinant(M)
                if det:
                    out.append((tau, M, det))
            self._bases = out
        return self._bases

    def contains_real(self, q: Sequence[int], local: bool = True) -> bool:
        if not local:
            q = self.to_local(q)
            if q is None:
                return False
        if self.r == 0:
            return not any(q)
        for tau, M, _ in self.bases():
            sol = solve_integer_system([r[:] for r in M], list(q))
            if sol is not None and all(v >= 0 for v in sol[0]):
                return True
        return False

    def parallelepiped_points(self, tau, M, det) -> list[tuple[int, ...]]:
        """Nonzero lattice points of the half-open parallelepiped of tau (local)."""
        if abs(det) == 1:
            return []
        H, _ = hermite_normal_form(M)
        diag = [H.rows[i][i] for i in range(self.r)]
        pts = set()
        for res in product(*(range(h) for h in diag)):
            nums, den = solve_integer_system([r[:] for r in M], list(res))
            frac = [Fraction(v % den, den) for v in nums]
            p = tuple(int(sum(frac[k] * M[i][k] for k in range(self.r))) for i in range(self.r))
            if any(p):
                pts.add(p)
        return sorted(pts)

    # semigroup membership -------------------------------------------------
    def _functional(self):
        """Integral w vanishing on J with w . b_j >= 1 off J."""
        if self._w is None:
            r = self.r
            rest = [j for j in range(self.m) if j not in self.J]
            A_ub, b_ub, A_eq, b_eq = [], [], [], []
            for j in range(self.m):
                g = list(self.local[j])
                if j in self.J:
                    A_eq.append(g)
                    b_eq.append(0)
                else:
                    A_ub.append([-v for v in g])
                    b_ub.append(-1)
            obj = [0] * r
            for j in rest:
                obj = [a + b for a, b in zip(obj, self.local[j])]
            sol = linprog(obj, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None,
                          b_eq=b_eq or None, free=range(r))
            if not sol.ok:
                raise AssertionError("no separating functional for the pointed part")
            L = lcm(*(v.denominator for v in sol.x)) if sol.x else 1
            self._w = tuple(int(v * L) for v in sol.x)
        return self._w

    def semigroup_coefficients(self, q: Sequence[int], local: bool = True) -> tuple[int, ...] | None:
        """x in N^m with B x = q, or None. Exhaustive bounded search."""
        if not local:
            q = self.to_local(q)
            if q is None:
                return None
        q = tuple(q)
        if self.r == 0:
            return (0,) * self.m if not any(q) else None
        w = self._functional()
        rest = [j for j in range(self.m) if j not in self.J]
        weights = [dot(w, self.local[j]) for j in rest]
        J = list(self.J)
        BJ = IntegerMatrix.from_columns([self.local[j] for j in J], self.r) if J else None
        dead = set()

        def leaf(resid):
            if not J:
                return () if not any(resid) else None
            return lattice_contains(BJ, resid)

        def dfs(k, resid, budget):
            if k == len(rest):
                if budget:
                    return None
                z = leaf(resid)
                return None if z is None else ((), z)
            key = (k, resid)
            if key in dead:
                return None
            g = self.local[rest[k]]
            wk = weights[k]
            t = 0
            cur = resid
            while t * wk <= budget:
                found = dfs(k + 1, cur, budget - t * wk)
                if found is not None:
                    return ((t,) + found[0], found[1])
                t += 1
                cur = tuple(a - b for a, b in zip(cur, g))
            dead.add(key)
            return None

        budget = dot(w, q)
        if budget < 0:
            return None
        found = dfs(0, q, budget)
        if found is None:
            return None
        x = [0] * self.m
        for j, t in zip(rest, found[0]):
            x[j] = t
        if J:
            z = found[1]
            k = self.kernel_vec
            s = 0
            for idx, j in enumerate(J):
                if z[idx] < 0:
                    s = max(s, -(z[idx] // k[j]))
            for idx, j in enumerate(J):
                x[j] = z[idx] + s * k[j]
        return tuple(x)


def _cone(cfg) -> Cone:
    return cfg if isinstance(cfg, Cone) else Cone(cfg)


def hilbert_basis(cfg) -> list[tuple[int, ...]]:
    """The minimal Hilbert basis of a pointed cone (ambient coordinates, sorted)."""
    C = _cone(cfg)
    if not C.pointed:
        raise NonPointedError("unsupported: non-pointed cone")
    if C.r == 0:
        return []
    cand = {tuple(g) for g in C.local}
    for tau, M, det in C.bases():
        cand.update(C.parallelepiped_points(tau, M, det))
    cand = sorted(cand)
    keep = []
    for h in cand:
        reducible = False
        for g in cand:
            if g == h:
                continue
            diff = tuple(a - b for a, b in zip(h, g))
            if any(diff) and C.contains_real(diff):
                reducible = True
                break
        if not reducible:
            keep.append(h)
    return sorted(C.to_ambient(h) for h in keep)


def is_hilbert_basis(cfg) -> HilbertVerdict:
    """Decide whether the generators form a Hilbert basis of their cone.

    Every lattice point of the cone is an integer combination of generators
    plus a point of some half-open parallelepiped, so it suffices that each
    such point lies in the semigroup.
    """
    C = _cone(cfg)
    if C.r == 0:
        return HilbertVerdict(True, None, [])
    if len(C.J) == C.m:
        # cone is a linear space; semigroup = group
        H, _ = hermite_normal_form(IntegerMatrix.from_columns(C.local, C.r))
        diag = [H.rows[i][i] for i in range(C.r)]
        if all(v == 1 for v in diag):
            return HilbertVerdict(True, None, None)
        k = next(i for i, v in enumerate(diag) if v != 1)
        e = tuple(int(i == k) for i in range(C.r))
        return HilbertVerdict(False, C.to_ambient(e), None)
    for tau, M, det in C.bases():
        for q in C.parallelepiped_points(tau, M, det):
            if C.semigroup_coefficients(q) is None:
                return HilbertVerdict(False, C.to_ambient(q), None)
    mb = hilbert_basis(C) if C.pointed else None
    return HilbertVerdict(True, None, mb)


def cells_are_hilbert(p, s) -> tuple[bool, object, tuple[int, ...] | None]:
    """Check every maximal cell; returns (ok, failing cell, witness)."""
    for cell in s.cells:
        if not cell.indices:
            continue
        v = is_hilbert_basis(p.A.submatrix(cell.indices))
        if not v.is_basis:
            return False, cell, v.witness
    return True, None, None


def in_semigroup(B, p: Sequence[int]) -> tuple[int, ...] | None:
    return Cone(as_matrix(B)).semigroup_coefficients(p, local=False)
