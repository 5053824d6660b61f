"""Linear programming over LP(b) = min{c x : A x = b, x >= 0}, vertices of
Q_c = {y : y A <= c} and the regular subdivision of the columns of A."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterable, Sequence

from .exact import (
    IntegerMatrix,
    RankDeficientError,
    as_fraction,
    as_matrix,
    determinant,
    dot,
    format_rational,
    parse_rational,
    rank,
    solve_integer_system,
    solve_linear,
    spans_full_lattice,
)
from .linprog import linprog, simplex


class ProblemError(ValueError):
    """The pair (A, c) violates a standing assumption."""


class DualInfeasibleError(ProblemError):
    pass


class Problem:
    """The pair (A, c); ``A`` must have rank d and span Z^d, and Q_c must be nonempty."""

    __slots__ = ("A", "c", "d", "n", "_cols")

    def __init__(self, A, c: Sequence, check: bool = True):
        self.A = as_matrix(A)
        self.c = tuple(as_fraction(v) for v in c)
        self.d, self.n = self.A.shape
        if len(self.c) != self.n:
            raise ProblemError(f"cost vector has length {len(self.c)}, expected {self.n}")
        self._cols = self.A.columns
        if check:
            if self.d == 0 or rank(self.A) != self.d:
                raise ProblemError("A must have full row rank")
            if not spans_full_lattice(self.A):
                raise ProblemError("columns of A do not span the integer lattice")
            if not dual_feasible(self.A, self.c):
                raise DualInfeasibleError("Q_c is empty")

    @property
    def columns(self):
        return self._cols

    def with_cost(self, c: Sequence) -> "Problem":
        return Problem(self.A, c, check=False)

    def slack(self, y: Sequence, j: int) -> Fraction:
        return self.c[j] - dot(y, self._cols[j])

    def tight(self, y: Sequence) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if dot(y, self._cols[j]) == self.c[j])

    def __repr__(self):
        return f"Problem(A={self.A.tolist()}, c={[format_rational(v) for v in self.c]})"


def dual_feasible(A, c) -> bool:
    return dual_feasible_point(A, c) is not None


def dual_feasible_point(A, c) -> tuple[Fraction, ...] | None:
    """Some y with y A <= c, or None."""
    A = as_matrix(A)
    d, n = A.shape
    if all(as_fraction(v) >= 0 for v in c):
        return (Fraction(0),) * d
    sol = linprog([0] * d, A_ub=[list(col) for col in A.columns], b_ub=list(c), free=range(d))
    return sol.x if sol.ok else None


@dataclass(frozen=True)
class Cell:
    indices: tuple[int, ...]
    witness: tuple[Fraction, ...] | None = None

    def __contains__(self, j):
        return j in self.indices

    def __len__(self):
        return len(self.indices)

    def issubset(self, other: "Cell | Iterable[int]") -> bool:
        other = other.indices if isinstance(other, Cell) else other
        return set(self.indices) <= set(other)


@dataclass(frozen=True)
class Vertex:
    point: tuple[Fraction, ...]
    tight: tuple[int, ...]


@dataclass(frozen=True)
class Subdivision:
    problem: Problem = field(compare=False)
    cells: tuple[Cell, ...]

    @property
    def maximal_cells(self) -> tuple[Cell, ...]:
        return self.cells

    def index_sets(self) -> list[tuple[int, ...]]:
        return [c.indices for c in self.cells]

    def __len__(self):
        return len(self.cells)

    def contains_set(self, tau: Iterable[int]) -> bool:
        """True if tau lies inside some maximal cell."""
        tau = set(tau)
        return any(tau <= set(c.indices) for c in self.cells)

    def to_json(self) -> dict:
        return {
            "cells": [list(c.indices) for c in self.cells],
            "witnesses": [[format_rational(v) for v in c.witness] for c in self.cells],
        }

    @classmethod
    def from_json(cls, problem: Problem, data) -> "Subdivision":
        if isinstance(data, str):
            data = json.loads(data)
        cells = [
            Cell(tuple(ix), tuple(parse_rational(str(v)) for v in w))
            for ix, w in zip(data["cells"], data["witnesses"])
        ]
        return _make_subdivision(problem, cells)


def _make_subdivision(problem, cells) -> Subdivision:
    cells = sorted(cells, key=lambda cl: cl.indices)
    return Subdivision(problem, tuple(cells))


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    optimal_cell: Cell


def _as_vector(b) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in b)


def lp_solve(p: Problem, b: Sequence, method: str = "simplex") -> LPResult | None:
    """Solve LP(b) exactly; ``None`` when b is outside cone(A).

    The dual solution is always a vertex of Q_c, and ``optimal_cell`` is its
    tight set, which contains the support of the primal solution.
    """
    b = _as_vector(b)
    if len(b) != p.d:
        raise ValueError("right-hand side has wrong length")
    if method == "simplex":
        sol = simplex(p.A.rows, b, p.c)
        if sol.status == "infeasible":
            return None
        if sol.status == "unbounded":
            raise DualInfeasibleError("LP unbounded, so Q_c is empty")
        x, y = sol.x, sol.y
        if len(sol.basis) < p.d:
            # redundant rows cannot occur at rank d; guard anyway
            raise RankDeficientError("degenerate basis size")
    elif method == "bases":
        found = _lp_by_bases(p, b)
        if found is None:
            if not linprog([0] * p.n, A_eq=p.A.rows, b_eq=b).ok:
                return None
            raise DualInfeasibleError("no optimal basis although LP(b) is feasible")
        x, y = found
    else:
        raise ValueError(f"unknown LP method {method!r}")
    value = dot(p.c, x)
    return LPResult(value, tuple(x), tuple(y), Cell(p.tight(y), tuple(y)))


def _lp_by_bases(p: Problem, b):
    """Reference path: first d-subset that is both primal and dual feasible."""
    cols = p.columns
    for B in combinations(range(p.n), p.d):
        M = [[cols[j][i] for j in B] for i in range(p.d)]
        xb = solve_linear(M, b)
        if xb is None or any(v < 0 for v in xb) or determinant(M) == 0:
            continue
        y = solve_linear([list(cols[j]) for j in B], [p.c[j] for j in B])
        if all(dot(y, cols[j]) <= p.c[j] for j in range(p.n)):
            x = [Fraction(0)] * p.n
            for j, v in zip(B, xb):
                x[j] = v
            return x, y
    return None


def dual_vertices(p: Problem, method: str = "auto", limit: int = 30000) -> list[Vertex]:
    """All vertices of Q_c, sorted by coordinates.

    ``bases`` solves y A_s = c_s for every invertible d-subset s;
    ``pivot`` walks the edge graph of a lexicographically perturbed Q_c.
    ``auto`` picks ``bases`` unless there are more than ``limit`` subsets.
    """
    if method == "auto":
        method = "bases" if comb(p.n, p.d) <= limit else "pivot"
    if method == "bases":
        pts = _vertices_by_bases(p)
    elif method == "pivot":
        pts = {}
        for B in _PerturbedWalk(p, sign=1).bases():
            y = _basis_point(p, B)
            pts.setdefault(y, None)
        pts = list(pts)
    else:
        raise ValueError(f"unknown vertex method {method!r}")
    return sorted((Vertex(y, p.tight(y)) for y in pts), key=lambda v: v.point)


def _scaled_cost(p: Problem):
    L = lcm(*(v.denominator for v in p.c)) if p.c else 1
    return L, [int(v * L) for v in p.c]


def _vertices_by_bases(p: Problem) -> list[tuple[Fraction, ...]]:
    L, cs = _scaled_cost(p)
    cols = p.columns
    seen = set()
    out = []
    for B in combinations(range(p.n), p.d):
        # y A_B = c_B  <=>  A_B^T y = c_B
        sol = solve_integer_system([cols[j] for j in B], [cs[j] for j in B])
        if sol is None:
            continue
        nums, den = sol
        key = (tuple(nums), den)
        # feasibility in integers: nums . a_j <= den * cs_j
        if all(dot(nums, cols[j]) <= den * cs[j] for j in range(p.n)):
            y = tuple(Fraction(v, den * L) for v in nums)
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def _basis_point(p: Problem, B) -> tuple[Fraction, ...]:
    return tuple(solve_linear([list(p.columns[j]) for j in B], [p.c[j] for j in B]))


class _PerturbedWalk:
    """Dual-feasible bases of c + eps with eps_j = sign * t^(j+1), t -> 0+.

    Under the perturbation every dual-feasible basis is nondegenerate, so
    the bases are exactly the vertices of the perturbed polyhedron and a
    breadth-first search over dual pivots finds them all.
    """

    def __init__(self, p: Problem, sign: int = -1):
        self.p = p
        self.sign = sign

    # tableau helpers -------------------------------------------------
    def _tableau(self, B):
        p = self.p
        d, n = p.d, p.n
        rows = p.A.rows
        aug = [[Fraction(rows[i][j]) for j in B] + [Fraction(v) for v in rows[i]] for i in range(d)]
        for col in range(d):
            piv = next((i for i in range(col, d) if aug[i][col] != 0), None)
            if piv is None:
                return None
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for i in range(d):
                f = aug[i][col]
                if i != col and f:
                    aug[i] = [u - f * v for u, v in zip(aug[i], aug[col])]
        return [r[d:] for r in aug]

    @staticmethod
    def _pivot(U, k, j):
        U = [list(r) for r in U]
        inv = 1 / U[k][j]
        U[k] = [v * inv for v in U[k]]
        pr = U[k]
        for i in range(len(U)):
            f = U[i][j]
            if i != k and f:
                U[i] = [u - f * v for u, v in zip(U[i], pr)]
        return U

    def reduced(self, B, U, j):
        """Perturbed reduced cost of column j as (real, coef of t^1, t^2, ...)."""
        c = self.p.c
        vec = [Fraction(0)] * (self.p.n + 1)
        vec[0] = c[j] - sum(c[b] * U[k][j] for k, b in enumerate(B))
        vec[1 + j] += self.sign
        for k, b in enumerate(B):
            if U[k][j]:
                vec[1 + b] -= self.sign * U[k][j]
        return vec

    @staticmethod
    def _lexsign(vec):
        for v in vec:
            if v:
                return 1 if v > 0 else -1
        return 0

    def start(self):
        """A perturbed-optimal basis for b = A 1 by Bland pivoting."""
        p = self.p
        b = [sum(r) for r in p.A.rows]
        sol = simplex(p.A.rows, b, p.c)
        if not sol.ok:
            raise DualInfeasibleError("Q_c is empty")
        B = list(sol.basis)
        U = self._tableau(B)
        xb = [sol.x[j] for j in B]
        while True:
            basic = set(B)
            enter = next(
                (j for j in range(p.n) if j not in basic and self._lexsign(self.reduced(B, U, j)) < 0),
                None,
            )
            if enter is None:
                return B, U
            best = None
            for k in range(p.d):
                a = U[k][enter]
                if a > 0:
                    key = (xb[k] / a, B[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                raise DualInfeasibleError("perturbed dual polyhedron is empty")
            k = best[1]
            theta = xb[k] / U[k][enter]
            xb = [v - theta * U[i][enter] for i, v in enumerate(xb)]
            xb[k] = theta
            U = self._pivot(U, k, enter)
            B[k] = enter

    def bases(self):
        """Yield every perturbed dual-feasible basis, as a sorted tuple."""
        p = self.p
        B, U = self.start()
        order = sorted(range(p.d), key=lambda k: B[k])
        B = [B[k] for k in order]
        U = [U[k] for k in order]
        seen = {tuple(B)}
        queue = [(B, U)]
        while queue:
            B, U = queue.pop()
            yield tuple(B)
            basic = set(B)
            red = {j: self.reduced(B, U, j) for j in range(p.n) if j not in basic}
            for k in range(p.d):
                best = None
                for j, r in red.items():
                    u = U[k][j]
                    if u < 0:
                        key = tuple(v / -u for v in r)
                        if best is None or key < best[0]:
                            best = (key, j)
                if best is None:
                    continue
                j = best[1]
                nb = sorted(B[:k] + B[k + 1:] + [j])
                t = tuple(nb)
                if t in seen:
                    continue
                seen.add(t)
                nu = self._pivot(U, k, j)
                # reorder rows to match the sorted basis
                pos = {b: i for i, b in enumerate(B)}
                pos[j] = k
                nu = [nu[pos[b]] for b in nb]
                queue.append((nb, nu))


def regular_subdivision(p: Problem, method: str = "auto") -> Subdivision:
    """Maximal cells = tight sets of the vertices of Q_c."""
    cells = {}
    for v in dual_vertices(p, method=method):
        cells.setdefault(v.tight, Cell(v.tight, v.point))
    if not cells:
        raise DualInfeasibleError("Q_c has no vertices")
    return _make_subdivision(p, cells.values())


def lexicographic_subdivision(p: Problem, sign: int = -1) -> Subdivision:
    """The triangulation Delta_{c + eps}, eps_j = sign * t^(j+1), t -> 0+.

    Witnesses carry the unperturbed vertex c_B A_B^{-1}; each cell is a
    basis and lies in the tight set of its witness.
    """
    cells = [Cell(B, _basis_point(p, B)) for B in _PerturbedWalk(p, sign).bases()]
    return _make_subdivision(p, cells)


def is_refinement(fine: Subdivision, coarse: Subdivision) -> bool:
    if fine.problem.A != coarse.problem.A:
        raise ValueError("subdivisions of different configurations")
    big = [set(c.indices) for c in coarse.cells]
    return all(any(set(c.indices) <= s for s in big) for c in fine.cells)


def is_triangulation(s: Subdivision) -> bool:
    p = s.problem
    return all(len(c) == p.d and rank(p.A.submatrix(c.indices)) == p.d for c in s.cells)


def is_unimodular(s: Subdivision) -> tuple[bool, Cell | None, int | None]:
    """(True, None, None) or (False, cell, det) for the first cell with |det| != 1."""
    if not is_triangulation(s):
        raise ValueError("unimodularity is only defined for triangulations")
    A = s.problem.A
    for c in s.cells:
        det = determinant(A.submatrix(c.indices))
        if abs(det) != 1:
            return False, c, det
    return True, None, None


def minimal_cell_containing(p: Problem, s: Subdivision | None, b: Sequence) -> Cell:
    """Inclusion-minimal cell whose cone contains b.

    This is the union of the supports of all optimal solutions of LP(b),
    found with one auxiliary LP; the witness is a dual optimum that is
    slack off the cell.
    """
    b = _as_vector(b)
    res = lp_solve(p, b)
    if res is None:
        raise ValueError("b lies outside cone(A)")
    face = res.optimal_cell.indices
    sigma = _max_support(p, b, face)
    # dual optimum slack outside sigma: max t with y a_j + t <= c_j off sigma,
    # y a_j = c_j on sigma, t <= 1 (the smallest slack, not their sum)
    d = p.d
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for j in range(p.n):
        row = list(p.columns[j]) + [Fraction(0)]
        if j in sigma:
            A_eq.append(row)
            b_eq.append(p.c[j])
        else:
            row[d] = Fraction(1)
            A_ub.append(row)
            b_ub.append(p.c[j])
    A_ub.append([Fraction(0)] * d + [Fraction(1)])
    b_ub.append(Fraction(1))
    sol = linprog([0] * d + [1], A_ub=A_ub, b_ub=b_ub, A_eq=A_eq or None, b_eq=b_eq or None,
                  free=range(d + 1), maximize=True)
    y = tuple(sol.x[:d])
    if p.tight(y) != tuple(sigma):
        raise AssertionError("strict complementarity failed")
    if s is not None and not s.contains_set(sigma):
        raise ValueError("minimal cell is not a face of the given subdivision")
    return Cell(tuple(sigma), y)


def _max_support(p: Problem, b, face) -> tuple[int, ...]:
    """Union of supports of x >= 0 with A x = b and support inside ``face``.

    Homogenized: maximize sum t_j with A x = s b, x_j >= t_j, 0 <= t_j <= 1.
    """
    face = list(face)
    k = len(face)
    if k == 0:
        return ()
    # variables: x (k), t (k), s (1)
    nv = 2 * k + 1
    A_eq = []
    for i in range(p.d):
        row = [Fraction(p.columns[j][i]) for j in face] + [Fraction(0)] * k + [-b[i]]
        A_eq.append(row)
    A_ub, b_ub = [], []
    for q in range(k):
        row = [Fraction(0)] * nv
        row[k + q] = Fraction(1)
        row[q] = Fraction(-1)
        A_ub.append(row)
        b_ub.append(Fraction(0))
        row = [Fraction(0)] * nv
        row[k + q] = Fraction(1)
        A_ub.append(row)
        b_ub.append(Fraction(1))
    obj = [0] * (2 * k) + [0]
    for q in range(k):
        obj[k + q] = 1
    sol = linprog(obj, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[0] * p.d, maximize=True)
    return tuple(sorted(face[q] for q in range(k) if sol.x[k + q] > 0))


def lp_max_coordinate(p: Problem, b: Sequence, i: int, res: LPResult | None = None) -> Fraction | None:
    """max x_i over the optimal face of LP(b); ``None`` if that face is unbounded in x_i."""
    b = _as_vector(b)
    res = res or lp_solve(p, b)
    if res is None:
        raise ValueError("b lies outside cone(A)")
    cols = list(res.optimal_cell.indices)
    if i not in cols:
        return Fraction(0)
    M = [[p.columns[j][r] for j in cols] for r in range(p.d)]
    cost = [-1 if j == i else 0 for j in cols]
    sol = simplex(M, b, cost)
    if sol.status == "unbounded":
        return None
    return -sol.value


def in_cone(p: Problem, b: Sequence) -> bool:
    return linprog([0] * p.n, A_eq=p.A.rows, b_eq=list(b)).ok
