"""Graphs, clique matrices, the set-packing system and the perfectness check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from string import ascii_lowercase
from typing import Iterable, Sequence

from .exact import IntegerMatrix, dot, format_rational
from .geometry import (
    Cell,
    Problem,
    Subdivision,
    dual_vertices,
    is_refinement,
    is_triangulation,
    is_unimodular,
    lexicographic_subdivision,
    lp_max_coordinate,
    lp_solve,
    regular_subdivision,
)

PERFECT = "PERFECT"
IMPERFECT = "IMPERFECT"


class InvariantError(AssertionError):
    """A structural property that must always hold was violated."""


@dataclass(frozen=True)
class Graph:
    d: int
    edges: frozenset

    def __init__(self, d: int, edges: Iterable[Sequence[int]] = ()):
        es = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < d and 0 <= v < d):
                raise ValueError(f"edge {(u, v)} out of range for {d} vertices")
            es.add((min(u, v), max(u, v)))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "edges", frozenset(es))

    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in range(self.d)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return nb

    @classmethod
    def cycle(cls, k: int) -> "Graph":
        return cls(k, [(i, (i + 1) % k) for i in range(k)])

    @classmethod
    def path(cls, k: int) -> "Graph":
        return cls(k, [(i, i + 1) for i in range(k - 1)])

    @classmethod
    def complete(cls, k: int) -> "Graph":
        return cls(k, [(i, j) for i in range(k) for j in range(i + 1, k)])

    @classmethod
    def from_cliques(cls, d: int, cliques: Iterable[Iterable[int]]) -> "Graph":
        edges = []
        for K in cliques:
            K = sorted(K)
            edges += [(K[i], K[j]) for i in range(len(K)) for j in range(i + 1, len(K))]
        return cls(d, edges)


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """Inclusion-maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    nb = g.neighbours()
    out = []

    def expand(R, P, X):
        if not P and not X:
            out.append(tuple(sorted(R)))
            return
        pivot = max(P | X, key=lambda u: len(nb[u] & P))
        for v in sorted(P - nb[pivot]):
            expand(R | {v}, P & nb[v], X & nb[v])
            P = P - {v}
            X = X | {v}

    expand(set(), set(range(g.d)), set())
    return sorted(out)


def clique_names(k: int) -> list[str]:
    if k <= len(ascii_lowercase):
        return list(ascii_lowercase[:k])
    return [f"z{i + 1}" for i in range(k)]


@dataclass
class SetPackingSystem:
    problem: Problem
    cliques: list[tuple[int, ...]]
    clique_labels: list[str]

    @property
    def d(self) -> int:
        return self.problem.d

    @property
    def k(self) -> int:
        return len(self.cliques)

    def variable_names(self) -> list[str]:
        return self.clique_labels + [f"v{i + 1}" for i in range(self.d)]


def build_system(g: Graph, cliques: Sequence[Iterable[int]] | None = None) -> SetPackingSystem:
    """A = [C | -I_d], c = (1, ..., 1, 0, ..., 0); C has one column per clique."""
    cl = [tuple(sorted(K)) for K in cliques] if cliques is not None else maximal_cliques(g)
    d = g.d
    rows = [[int(v in K) for K in cl] + [-int(i == v) for i in range(d)] for v in range(d)]
    c = [1] * len(cl) + [0] * d
    return SetPackingSystem(Problem(rows, c), cl, clique_names(len(cl)))


def perturbation(d: int, n: int, sign: int = -1) -> list[Fraction]:
    """eps_i = sign * (1 / d^(d+2))^i for i = 1..n."""
    delta = Fraction(1, d ** (d + 2))
    return [sign * delta ** i for i in range(1, n + 1)]


def perturb(sys, sign: int = -1) -> tuple[Fraction, ...]:
    """c' = c + eps.  The default (negative) sign gives the pulling refinement."""
    p = sys.problem if isinstance(sys, SetPackingSystem) else sys
    eps = perturbation(p.d, p.n, sign)
    return tuple(a + e for a, e in zip(p.c, eps))


def lam(sys, b: Sequence, i: int, res=None) -> Fraction:
    """lambda_{c,i}(b): the largest x_i among optimal solutions of LP(b)."""
    p = sys.problem if isinstance(sys, SetPackingSystem) else sys
    return lp_max_coordinate(p, b, i, res)


@dataclass(frozen=True)
class GreedyFailure:
    index: int
    b: tuple[int, ...]
    value: Fraction


def lex_greedy_optimum(sys, b: Sequence[int]):
    """x_i = lambda_i(b^{i-1}), b^i = b^{i-1} - x_i a_i.

    Returns the integer vector, or a GreedyFailure at the first
    non-integral lambda.
    """
    p = sys.problem if isinstance(sys, SetPackingSystem) else sys
    r = tuple(int(v) for v in b)
    if lp_solve(p, r) is None:
        raise ValueError("b lies outside cone(A)")
    x = []
    for i in range(p.n):
        v = lp_max_coordinate(p, r, i)
        if v is None:
            raise ValueError(f"lambda_{i} is unbounded; the greedy needs a bounded optimal face")
        if v.denominator != 1:
            return GreedyFailure(i, r, v)
        t = int(v)
        x.append(t)
        if t:
            r = tuple(a - t * e for a, e in zip(r, p.columns[i]))
    return tuple(x)


@dataclass
class PerfectnessCertificate:
    verdict: str
    c_prime: tuple[Fraction, ...]
    refinement: Subdivision
    coarse: Subdivision
    witness: dict = field(default_factory=dict)

    @property
    def is_perfect(self) -> bool:
        return self.verdict == PERFECT

    def to_json(self) -> dict:
        w = {}
        for k, v in self.witness.items():
            if isinstance(v, (tuple, list)):
                w[k] = [format_rational(x) if isinstance(x, Fraction) else x for x in v]
            else:
                w[k] = v
        return {
            "verdict": self.verdict,
            "c_prime": [format_rational(v) for v in self.c_prime],
            "cells": len(self.refinement),
            "coarse_cells": len(self.coarse),
            "witness": w,
        }

    def verify(self, p: Problem) -> bool:
        if self.verdict == PERFECT:
            s = self.refinement
            ok, _, _ = is_unimodular(s)
            return ok and is_refinement(s, self.coarse)
        w = self.witness
        if "vertex" in w:
            y = tuple(Fraction(v) for v in w["vertex"])
            tight = p.tight(y)
            feasible = all(dot(y, col) <= cj for col, cj in zip(p.columns, p.c))
            from .exact import rank

            vertex = rank(IntegerMatrix.from_columns([p.columns[j] for j in tight], p.d)) == p.d if tight else False
            return feasible and vertex and any(v.denominator != 1 for v in y)
        if "cell" in w:
            from .exact import determinant

            return abs(determinant(p.A.submatrix(tuple(w["cell"])))) != 1
        return False


def perturbed_subdivision(p: Problem, sign: int = -1, method: str = "auto") -> Subdivision:
    """Delta_{c'} for c' = c + eps.

    With exact rationals when the number of bases is small, otherwise by the
    symbolic lexicographic walk, which yields the same triangulation.
    """
    if method == "exact" or (method == "auto" and comb(p.n, p.d) <= 20000):
        return regular_subdivision(p.with_cost(perturb(p, sign)), method="bases")
    return lexicographic_subdivision(p, sign)


def perfectness_check(g: Graph, sign: int = -1, method: str = "auto", sys: SetPackingSystem | None = None):
    sys = sys or build_system(g)
    p = sys.problem
    cp = perturb(p, sign)
    coarse = regular_subdivision(p)
    fine = perturbed_subdivision(p, sign, method)
    fine = Subdivision(p, fine.cells)
    if not is_triangulation(fine):
        raise InvariantError("perturbed subdivision is not a triangulation")
    if not is_refinement(fine, coarse):
        raise InvariantError("perturbed subdivision does not refine Delta_c")
    ok, cell, det = is_unimodular(fine)
    if ok:
        return PerfectnessCertificate(PERFECT, cp, fine, coarse)
    witness = {"cell": list(cell.indices), "det": det}
    for v in dual_vertices(p):
        if any(x.denominator != 1 for x in v.point):
            witness["vertex"] = list(v.point)
            break
    return PerfectnessCertificate(IMPERFECT, cp, fine, coarse, witness)
