"""Wheels, the test set built from non-cells, TDI certificates and an
augmentation-based integer program solver."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import floor
from typing import Iterable, Sequence

from .exact import (
    IntegerMatrix,
    as_fraction,
    dot,
    format_rational,
    hermite_normal_form,
    integer_kernel_basis,
    parse_rational,
    rank,
    solve_integer_system,
    _hnf_pivots,
)
from .geometry import (
    Problem,
    Subdivision,
    dual_vertices,
    lp_max_coordinate,
    lp_solve,
    regular_subdivision,
)
from .hilbert import Cone, cells_are_hilbert, is_hilbert_basis
from .linprog import UNBOUNDED, simplex
from .oracle import ip_optimum

TDI = "TDI"
NOT_TDI = "NOT_TDI"


class NotHilbertError(ValueError):
    pass


@dataclass(frozen=True)
class TestVector:
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    tag: str = "independent-tau"
    support: tuple[int, ...] = ()  # tau or kappa

    __test__ = False  # keep pytest from collecting this class

    def vector(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    def check(self, p: Problem) -> None:
        """Raise AssertionError when a defining invariant fails."""
        cols = p.columns
        lhs = [sum(cols[j][i] * self.plus[j] for j in range(p.n)) for i in range(p.d)]
        rhs = [sum(cols[j][i] * self.minus[j] for j in range(p.n)) for i in range(p.d)]
        assert lhs == rhs, "test vector is not A-balanced"
        assert dot(p.c, self.plus) > dot(p.c, self.minus), "test vector does not improve the cost"
        assert all(a == 0 or b == 0 for a, b in zip(self.plus, self.minus)), "supports overlap"
        assert all(v in (0, 1) for v in self.plus), "positive part is not 0-1"
        assert min(self.minus, default=0) >= 0 and min(self.plus, default=0) >= 0
        if self.tag == "wheel":
            assert not any(self.minus), "wheel with nonzero negative part"


@dataclass
class TestSet:
    vectors: list[TestVector] = field(default_factory=list)

    __test__ = False

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def to_json(self):
        return [
            {"plus": list(v.plus), "minus": list(v.minus), "tag": v.tag, "support": list(v.support)}
            for v in self.vectors
        ]

    @classmethod
    def from_json(cls, data):
        return cls([TestVector(tuple(v["plus"]), tuple(v["minus"]), v["tag"], tuple(v["support"])) for v in data])


@dataclass(frozen=True)
class Wheel:
    kappa: tuple[int, ...]


@dataclass
class Certificate:
    verdict: str
    route: str
    witness: dict = field(default_factory=dict)

    @property
    def is_tdi(self) -> bool:
        return self.verdict == TDI

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            if isinstance(v, TestSet):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v

        return {"verdict": self.verdict, "route": self.route, "witness": enc(self.witness)}

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        w = dict(data.get("witness", {}))
        if "test_set" in w:
            w["test_set"] = TestSet.from_json(w["test_set"])
        for key in ("lp_value", "ip_value"):
            if w.get(key) is not None:
                w[key] = parse_rational(str(w[key]))
        return cls(data["verdict"], data["route"], w)

    def verify(self, p: Problem) -> bool:
        """Re-check the witness against p from scratch."""
        w = self.witness
        if self.verdict == NOT_TDI:
            if "b" in w:
                b = tuple(w["b"])
                lp = lp_solve(p, b)
                if lp is None:
                    return False
                ip, _ = ip_optimum(p, b)
                return ip is None or ip > lp.value
            if "cell" in w:
                cell = tuple(w["cell"])
                q = tuple(w["point"])
                C = Cone(p.A.submatrix(cell))
                return C.contains_real(q, local=False) and C.semigroup_coefficients(q, local=False) is None
            return False
        if self.route == "testset":
            if not is_hilbert_basis(p.A).is_basis:
                return False
            T = w["test_set"]
            try:
                for v in T:
                    v.check(p)
            except AssertionError:
                return False
            taus = {v.support for v in T}
            return all(tau in taus for tau in minimal_noncells(p, regular_subdivision(p)))
        if self.route == "cells":
            return cells_are_hilbert(p, regular_subdivision(p))[0]
        if self.route == "brute":
            return brute_force_tdi(p, w["box"]).is_tdi
        if self.route == "toric":
            from .toric import check_condition_v

            return is_hilbert_basis(p.A).is_basis and check_condition_v(p)
        return False


# -- wheels ---------------------------------------------------------------

def zero_sum_subsets(p: Problem, limit: int = 24) -> list[tuple[int, ...]]:
    """All nonempty kappa with A 1_kappa = 0 (meet in the middle)."""
    n = p.n
    if n > limit:
        raise ValueError(f"wheel enumeration is limited to n <= {limit}")
    cols = p.columns
    half = n // 2
    left, right = list(range(half)), list(range(half, n))

    def sums(idx):
        out = {}
        for mask in range(1 << len(idx)):
            s = [0] * p.d
            for k, j in enumerate(idx):
                if mask >> k & 1:
                    s = [a + b for a, b in zip(s, cols[j])]
            out.setdefault(tuple(s), []).append(mask)
        return out

    L, R = sums(left), sums(right)
    found = []
    for s, masks in L.items():
        neg = tuple(-v for v in s)
        for mr in R.get(neg, ()):
            for ml in masks:
                if ml == 0 and mr == 0:
                    continue
                kappa = tuple(left[k] for k in range(len(left)) if ml >> k & 1) + tuple(
                    right[k] for k in range(len(right)) if mr >> k & 1
                )
                found.append(kappa)
    return sorted(found)


def find_wheels(p: Problem, s: Subdivision | None = None) -> list[Wheel]:
    s = s or regular_subdivision(p)
    out = []
    for kappa in zero_sum_subsets(p):
        if sum(p.c[j] for j in kappa) <= 0:
            continue
        if all(s.contains_set(set(kappa) - {i}) for i in kappa):
            out.append(Wheel(kappa))
    return out


# -- test set construction ---------------------------------------------------

def minimal_noncells(p: Problem, s: Subdivision) -> list[tuple[int, ...]]:
    """Inclusion-minimal index sets not contained in any cell, by size.

    Built level by level from the faces of the subdivision: a candidate of
    size k is kept only when all its (k-1)-subsets are faces.
    """
    masks = [sum(1 << j for j in c.indices) for c in s.cells]

    def is_face(m):
        return any(m & cm == m for cm in masks)

    out = []
    level = {0}
    for k in range(1, p.n + 1):
        nxt = set()
        for m in level:
            top = m.bit_length()
            for j in range(top, p.n):
                t = m | (1 << j)
                if any(t & ~(1 << i) not in level for i in range(p.n) if t >> i & 1 and i != j):
                    continue
                if is_face(t):
                    nxt.add(t)
                else:
                    out.append(tuple(i for i in range(p.n) if t >> i & 1))
        if not nxt:
            break
        level = nxt
    return out


def optimal_cell(p: Problem, verts, b) -> tuple[int, ...]:
    """Tight set of a dual vertex maximizing y . b; smallest cell on ties."""
    best = None
    for v in verts:
        val = dot(v.point, b)
        if best is None or val > best[0] or (val == best[0] and v.tight < best[1]):
            best = (val, v.tight)
    return best[1]


def greedy_cell_point(p: Problem, sigma: Sequence[int], b: Sequence[int]):
    """Integer x >= 0 supported on sigma with A x = b, or the stuck residual.

    For each i in sigma, subtract floor(lambda_i) a_i, where lambda_i is the
    largest x_i over nonnegative solutions on sigma (columns with unbounded
    lambda_i are skipped).  The residual stays in cone(A_sigma) and is
    finished by exact semigroup search.  Returns (x, None) on success and
    (None, residual) when the residual is not in N A_sigma.
    """
    cols = p.columns
    sigma = list(sigma)
    M = [[cols[j][i] for j in sigma] for i in range(p.d)]
    x = [0] * p.n
    r = [int(v) for v in b]
    for k, j in enumerate(sigma):
        if not any(r):
            break
        cost = [0] * len(sigma)
        cost[k] = -1
        sol = simplex(M, r, cost)
        if sol.status == UNBOUNDED:
            continue
        if not sol.ok:
            raise AssertionError("residual left the cell cone")
        t = floor(-sol.value)
        if t:
            x[j] += t
            r = [a - t * e for a, e in zip(r, cols[j])]
    if any(r):
        rest = Cone(p.A.submatrix(tuple(sigma))).semigroup_coefficients(tuple(r), local=False)
        if rest is None:
            return None, tuple(r)
        for j, t in zip(sigma, rest):
            x[j] += t
    return tuple(x), None


def build_test_set(p: Problem, s: Subdivision | None = None, check_hilbert: bool = True):
    """The test set {1_tau - beta_tau}, or a NOT_TDI Certificate with a failing b.

    tau runs over the minimal index sets not contained in a cell; beta_tau
    is an integer optimum of LP(A 1_tau) found by the cell greedy.  Such
    tau with A 1_tau = 0 are exactly the wheels (beta = 0).  Any non-optimal
    w has a support outside every cell, hence above some tau, so the set is
    a test set as soon as every beta_tau exists.
    """
    if check_hilbert:
        hv = is_hilbert_basis(p.A)
        if not hv.is_basis:
            raise NotHilbertError(f"A is not a Hilbert basis; witness {hv.witness}")
    s = s or regular_subdivision(p)
    verts = dual_vertices(p)
    cols = p.columns
    T = TestSet()
    for tau in minimal_noncells(p, s):
        b = tuple(sum(cols[j][i] for j in tau) for i in range(p.d))
        plus = tuple(int(j in tau) for j in range(p.n))
        if not any(b):
            T.vectors.append(TestVector(plus, (0,) * p.n, "wheel", tau))
            continue
        sigma = optimal_cell(p, verts, b)
        beta, resid = greedy_cell_point(p, sigma, b)
        if beta is None:
            lp = lp_solve(p, resid)
            ip, _ = ip_optimum(p, resid)
            return Certificate(NOT_TDI, "testset", {
                "b": list(resid), "tau": list(tau), "lp_value": lp.value, "ip_value": ip,
            })
        # tau lies outside every cell and beta inside one, so the supports
        # can still meet; cancel the overlap to keep the parts disjoint
        common = [min(a, e) for a, e in zip(plus, beta)]
        plus = tuple(a - m for a, m in zip(plus, common))
        minus = tuple(a - m for a, m in zip(beta, common))
        independent = rank(IntegerMatrix.from_columns([cols[j] for j in tau], p.d)) == len(tau)
        T.vectors.append(TestVector(plus, minus, "independent-tau" if independent else "dependent-tau", tau))
    return T


def uncovered_nonoptimal(p: Problem, t, budget=None) -> tuple[int, ...] | None:
    """A minimal non-optimal exponent that no vector of t applies to, or None.

    The non-optimal x^w form the monomial ideal mono(in_c(I_A)); t is a test
    set exactly when the monomials x^{v+} generate all of it.
    """
    from .toric import divides, nonoptimal_generators

    leads = [v.plus for v in t]
    for w in nonoptimal_generators(p, budget=budget):
        if not any(divides(u, w) for u in leads):
            return w
    return None


def tdi_check_via_testset(p: Problem) -> Certificate:
    """TDI iff A is a Hilbert basis and every beta_tau exists."""
    hv = is_hilbert_basis(p.A)
    if not hv.is_basis:
        b = hv.witness
        lp = lp_solve(p, b)
        return Certificate(NOT_TDI, "testset", {"b": list(b), "lp_value": lp.value, "ip_value": None,
                                               "reason": "A is not a Hilbert basis"})
    res = build_test_set(p, check_hilbert=False)
    if isinstance(res, Certificate):
        return res
    for v in res:
        v.check(p)
    return Certificate(TDI, "testset", {"test_set": res})


def tdi_check_via_cells(p: Problem) -> Certificate:
    ok, cell, q = cells_are_hilbert(p, regular_subdivision(p))
    if ok:
        return Certificate(TDI, "cells", {})
    return Certificate(NOT_TDI, "cells", {"cell": list(cell.indices), "point": list(q)})


def tdi_check_via_toric(p: Problem, generators=None, budget=None) -> Certificate:
    from .toric import check_condition_v

    hv = is_hilbert_basis(p.A)
    if not hv.is_basis:
        lp = lp_solve(p, hv.witness)
        return Certificate(NOT_TDI, "toric", {"b": list(hv.witness), "lp_value": lp.value, "ip_value": None})
    if check_condition_v(p, generators, budget=budget):
        return Certificate(TDI, "toric", {})
    return Certificate(NOT_TDI, "toric", {"reason": "mono(in_c(I_A)) has a non-square-free generator"})


# -- augmentation ------------------------------------------------------------

def augment(p: Problem, t: Iterable[TestVector] | TestSet, u: Sequence[int]) -> tuple[int, ...]:
    """Apply improving vectors until none fits under u."""
    vecs = list(t)
    u = list(u)
    while True:
        for v in vecs:
            if all(a >= e for a, e in zip(u, v.plus)):
                u = [a - e + m for a, e, m in zip(u, v.plus, v.minus)]
                break
        else:
            return tuple(u)


def find_feasible(p: Problem, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some x in N^n with A x = b (bounded exhaustive semigroup search)."""
    if lp_solve(p, b) is None:
        return None
    return Cone(p.A).semigroup_coefficients(tuple(int(v) for v in b), local=False)


_SOLVER_CACHE: dict = {}


def _solver_for(p: Problem, method: str):
    key = (p.A, p.c, method)
    hit = _SOLVER_CACHE.get(key)
    if hit is not None:
        return hit
    if len(_SOLVER_CACHE) > 64:
        _SOLVER_CACHE.clear()
    made = None
    if method in ("auto", "testset"):
        try:
            res = build_test_set(p)
        except NotHilbertError:
            res = None
        if isinstance(res, TestSet):
            made = ("testset", res)
        elif method == "testset":
            raise ValueError("system is not TDI; the test set route does not apply")
    if made is None:
        from .toric import toric_groebner

        gb, order = toric_groebner(p.A, p.c)
        made = ("groebner", (gb, order))
    _SOLVER_CACHE[key] = made
    return made


def ipsolve(p: Problem, b: Sequence[int], method: str = "auto"):
    """(value, x) of min{c x : A x = b, x in N^n}, or (None, None).

    Starts from a feasible point and improves it with the test set T_{A,c}
    (TDI systems) or a toric Groebner basis for a term order refining c.
    """
    u = find_feasible(p, b)
    if u is None:
        return None, None
    kind, data = _solver_for(p, method)
    if kind == "testset":
        x = augment(p, data, u)
    else:
        from .toric import gb_augment

        gb, order = data
        x = gb_augment(gb, order, u)
    return dot(p.c, x), tuple(x)


# -- brute force ---------------------------------------------------------------

def _canonical_mod(H_cols, pivots, z):
    z = list(z)
    for r, j in pivots:
        h = H_cols[j]
        q = z[r] // h[r]
        if q:
            z = [a - q * e for a, e in zip(z, h)]
    return tuple(z)


class _CellSemigroup:
    """Lattice points of N A_sigma up to a growing functional bound."""

    def __init__(self, p: Problem, sigma):
        C = self.C = Cone(p.A.submatrix(sigma))
        J = set(C.J)
        self.w = C._functional() if C.r else ()
        self.rest = [C.local[j] for j in range(C.m) if j not in J]
        if J:
            H, _ = hermite_normal_form(IntegerMatrix.from_columns([C.local[j] for j in sorted(J)], C.r))
            self.pivots = _hnf_pivots(H)
            self.Hc = H.columns
        else:
            self.pivots, self.Hc = [], []
        self.W = -1
        self.keys = set()

    def _grow(self, W):
        w = self.w
        start = (0,) * self.C.r
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for z in frontier:
                for g in self.rest:
                    q = tuple(a + e for a, e in zip(z, g))
                    if dot(w, q) <= W and q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        self.keys = {_canonical_mod(self.Hc, self.pivots, z) for z in seen}
        self.W = W

    def __contains__(self, b):
        q = self.C.to_local(b)
        if q is None:
            return False
        wq = dot(self.w, q)
        if wq < 0:
            return False
        if wq > self.W:
            self._grow(max(wq, 2 * self.W))
        return _canonical_mod(self.Hc, self.pivots, q) in self.keys


def brute_force_tdi(p: Problem, box: int | None = None) -> Certificate:
    """Definitional check over every b in cone(A) with |b_i| <= box.

    For each b the LP value is max{y . b} over the vertices of Q_c and the
    optimal face is the set of nonnegative solutions supported on the tight
    set sigma of a maximizing vertex, so an integer optimum exists iff b is
    in the semigroup N A_sigma.  That semigroup is generated exhaustively.
    """
    if box is None:
        box = (p.d + 1) * max(abs(v) for col in p.columns for v in col)
    verts = dual_vertices(p)
    cols = p.columns
    covers = []
    for B in combinations(range(p.n), p.d):
        Mt = [[cols[j][i] for j in B] for i in range(p.d)]
        covers.append(Mt)
    sgs: dict = {}

    def in_cone(b):
        for Mt in covers:
            sol = solve_integer_system([r[:] for r in Mt], list(b))
            if sol is not None and min(sol[0]) >= 0:
                return True
        return False

    pts = sorted(product(range(-box, box + 1), repeat=p.d), key=lambda b: (max(map(abs, b)), b))
    checked = 0
    for b in pts:
        if not any(b) or not in_cone(b):
            continue
        checked += 1
        sigma = optimal_cell(p, verts, b)
        sg = sgs.get(sigma)
        if sg is None:
            sg = sgs[sigma] = _CellSemigroup(p, sigma)
        good = b in sg
        if not good:
            lp = max(dot(v.point, b) for v in verts)
            ip, _ = ip_optimum(p, b)
            return Certificate(NOT_TDI, "brute", {"b": list(b), "lp_value": lp, "ip_value": ip, "box": box})
    return Certificate(TDI, "brute", {"box": box, "checked": checked})
