"""Binomial and monomial ideals: Buchberger, toric ideals, initial ideals
and the largest monomial subideal of a binomial initial ideal."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from .exact import as_fraction, dot, integer_kernel_basis


class BudgetExceeded(RuntimeError):
    """Buchberger ran past its pair budget."""


class NoGeneratingSet(ValueError):
    pass


Exponent = tuple  # tuple of nonnegative ints


@dataclass(frozen=True)
class Binomial:
    """x^lead - x^trail, or the monomial x^lead when ``trail`` is None."""

    lead: Exponent
    trail: Exponent | None = None
    tied: bool = False

    @property
    def is_monomial(self) -> bool:
        return self.trail is None

    def vector(self) -> tuple[int, ...]:
        t = self.trail or (0,) * len(self.lead)
        return tuple(a - b for a, b in zip(self.lead, t))


class TermOrder:
    """Matrix-style term order: compare weight rows in turn, then a tiebreak.

    ``weights`` is a list of nonnegative rational weight vectors.  The
    tiebreak is ``lex`` (x_0 > x_1 > ...) or ``grevlex``.  Weights are
    scaled to integers so keys compare quickly.
    """

    def __init__(self, nvars: int, weights: Iterable[Sequence] = (), tiebreak: str = "lex"):
        self.nvars = nvars
        rows = []
        for w in weights:
            w = [as_fraction(v) for v in w]
            if len(w) != nvars:
                raise ValueError("weight length mismatch")
            if any(v < 0 for v in w):
                raise ValueError("weights must be nonnegative so that 1 is the smallest monomial")
            L = lcm(*(v.denominator for v in w))
            rows.append(tuple(int(v * L) for v in w))
        self.weights = tuple(rows)
        if tiebreak not in ("lex", "grevlex"):
            raise ValueError(f"unknown tiebreak {tiebreak!r}")
        self.tiebreak = tiebreak
        self._cache: dict = {}

    def key(self, u: Exponent):
        k = self._cache.get(u)
        if k is None:
            head = tuple(dot(w, u) for w in self.weights)
            if self.tiebreak == "lex":
                k = head + tuple(u)
            else:
                k = head + (sum(u),) + tuple(-v for v in reversed(u))
            if len(self._cache) < 1_000_000:
                self._cache[u] = k
        return k

    def weight_tie(self, u: Exponent, v: Exponent) -> bool:
        """True when u and v agree on the first weight row (the cost)."""
        if not self.weights:
            return False
        w = self.weights[0]
        return dot(w, u) == dot(w, v)


def cost_order(A, c: Sequence, tiebreak: str = "lex", y: Sequence | None = None) -> TermOrder:
    """Term order refining the cost c on the fibres of A.

    Costs are shifted to c - yA with y in Q_c, which is nonnegative and ranks
    A-balanced pairs exactly as c does.
    """
    from .geometry import dual_feasible_point

    cols = A.columns
    if y is None:
        y = dual_feasible_point(A, c)
    w = [as_fraction(cj) - dot(y, cols[j]) for j, cj in enumerate(c)]
    return TermOrder(len(c), [w], tiebreak)


# -- monomial helpers -----------------------------------------------------

def divides(u: Exponent, v: Exponent) -> bool:
    return all(a <= b for a, b in zip(u, v))


def mono_lcm(u: Exponent, v: Exponent) -> Exponent:
    return tuple(a if a > b else b for a, b in zip(u, v))


def minimalize(monos: Iterable[Exponent]) -> list[Exponent]:
    """Minimal generators (divisibility antichain), sorted."""
    ms = sorted(set(monos), key=lambda u: (sum(u), u))
    out: list[Exponent] = []
    for u in ms:
        if not any(divides(g, u) for g in out):
            out.append(u)
    return sorted(out)


# -- Buchberger -----------------------------------------------------------

class _Basis:
    def __init__(self, order: TermOrder):
        self.order = order
        self.polys: list[Binomial | None] = []

    def orient(self, p: Exponent, q: Exponent | None) -> Binomial | None:
        if q is None:
            return Binomial(p)
        if p == q:
            return None
        k = self.order.key
        if k(p) < k(q):
            p, q = q, p
        return Binomial(p, q, self.order.weight_tie(p, q))

    def _reduce_term(self, u: Exponent, skip: int | None = None):
        """Fully reduce the single term x^u; None means it reduced to 0."""
        polys = self.polys
        changed = True
        while changed:
            changed = False
            for i, g in enumerate(polys):
                if g is None or i == skip:
                    continue
                if divides(g.lead, u):
                    if g.trail is None:
                        return None
                    u = tuple(a - b + c for a, b, c in zip(u, g.lead, g.trail))
                    changed = True
                    break
        return u

    def normal_form(self, p: Exponent | None, q: Exponent | None, skip=None):
        """Normal form of x^p - x^q (either may be None for zero)."""
        while True:
            if p is not None:
                p = self._reduce_term(p, skip)
            if q is not None:
                q = self._reduce_term(q, skip)
            if p is None and q is None:
                return None
            if p is None:
                return Binomial(q)
            if q is None:
                return Binomial(p)
            return self.orient(p, q)


def _spoly(f: Binomial, g: Binomial):
    L = mono_lcm(f.lead, g.lead)
    def other(h):
        if h.trail is None:
            return None
        return tuple(a - b + c for a, b, c in zip(L, h.lead, h.trail))
    return other(f), other(g)


def buchberger(gens: Iterable[Binomial | tuple], order: TermOrder, budget: int | None = None) -> list[Binomial]:
    """Reduced Groebner basis of a binomial/monomial ideal.

    ``gens`` may contain Binomial objects or (u, v) pairs meaning x^u - x^v
    (v = None for a monomial).  Pairs are handled by the normal selection
    strategy with the product and chain criteria.  ``budget`` caps the
    number of S-pairs reduced.
    """
    B = _Basis(order)
    pending = []
    for g in gens:
        if isinstance(g, Binomial):
            p, q = g.lead, g.trail
        else:
            p, q = g
        h = B.orient(tuple(p), None if q is None else tuple(q))
        if h is not None:
            pending.append(h)
    pairs: list = []
    done: set = set()
    count = 0

    def add(h: Binomial):
        h = B.normal_form(h.lead, h.trail)
        if h is None:
            return
        i = len(B.polys)
        B.polys.append(h)
        for j, g in enumerate(B.polys[:-1]):
            if g is None:
                continue
            L = mono_lcm(g.lead, h.lead)
            heapq.heappush(pairs, (sum(L), order.key(L), j, i))

    for h in pending:
        add(h)
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        done.add((i, j))
        f, g = B.polys[i], B.polys[j]
        if f is None or g is None:
            continue
        if all(a == 0 or b == 0 for a, b in zip(f.lead, g.lead)):
            # coprime leads: S-pair reduces to zero (also for monomials)
            continue
        L = mono_lcm(f.lead, g.lead)
        if _chain(B, i, j, L, done):
            continue
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceeded(f"more than {budget} S-pairs")
        p, q = _spoly(f, g)
        h = B.normal_form(p, q)
        if h is not None:
            add(h)
    return _reduced(B)


def _chain(B, i, j, L, done) -> bool:
    for k, h in enumerate(B.polys):
        if k in (i, j) or h is None:
            continue
        if divides(h.lead, L):
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a in done and b in done:
                return True
    return False


def _reduced(B: _Basis) -> list[Binomial]:
    polys = [g for g in B.polys if g is not None]
    # drop elements whose lead is divisible by another lead
    polys.sort(key=lambda g: B.order.key(g.lead))
    keep: list[Binomial] = []
    for g in polys:
        if not any(divides(h.lead, g.lead) for h in keep):
            keep.append(g)
    R = _Basis(B.order)
    R.polys = list(keep)
    out = []
    for i, g in enumerate(keep):
        t = None if g.trail is None else R._reduce_term(g.trail, skip=i)
        h = Binomial(g.lead) if t is None else Binomial(g.lead, t, B.order.weight_tie(g.lead, t))
        out.append(h)
        R.polys[i] = h
    return sorted(out, key=lambda g: B.order.key(g.lead), reverse=True)


def is_groebner(gb: Sequence[Binomial], order: TermOrder) -> bool:
    """Every S-pair reduces to zero."""
    B = _Basis(order)
    B.polys = list(gb)
    for i in range(len(gb)):
        for j in range(i + 1, len(gb)):
            p, q = _spoly(gb[i], gb[j])
            if B.normal_form(p, q) is not None:
                return False
    return True


def is_reduced(gb: Sequence[Binomial]) -> bool:
    for i, g in enumerate(gb):
        for j, h in enumerate(gb):
            if i == j:
                continue
            if divides(h.lead, g.lead):
                return False
            if g.trail is not None and divides(h.lead, g.trail):
                return False
    return True


def reduce_by(gb: Sequence[Binomial], order: TermOrder, u: Exponent) -> Exponent | None:
    B = _Basis(order)
    B.polys = list(gb)
    return B._reduce_term(tuple(u))


# -- toric ideals ----------------------------------------------------------

def _split(v: Sequence[int]):
    return tuple(max(a, 0) for a in v), tuple(max(-a, 0) for a in v)


def toric_generators(A, budget: int | None = None) -> list[Binomial]:
    """Generators of I_A: saturate the lattice ideal of a kernel basis.

    Uses the extra variable t with t * x_1 ... x_n - 1 and eliminates t.
    """
    from .exact import as_matrix

    A = as_matrix(A)
    n = A.n
    kernel = integer_kernel_basis(A)
    if not kernel:
        return []
    gens = []
    for v in kernel:
        p, q = _split(v)
        gens.append((p + (0,), q + (0,)))
    gens.append(((1,) * n + (1,), (0,) * (n + 1)))
    elim = TermOrder(n + 1, [[0] * n + [1]], "grevlex")
    gb = buchberger(gens, elim, budget)
    out = []
    for g in gb:
        if g.lead[n] == 0 and (g.trail is None or g.trail[n] == 0):
            out.append(Binomial(g.lead[:n], None if g.trail is None else g.trail[:n]))
    return out


def setpacking_toric_generators(cliques: Sequence[Iterable[int]], d: int) -> list[Binomial]:
    """One binomial z_K * prod_{i in K} v_i - 1 per clique K (vertices 0-based)."""
    k = len(cliques)
    out = []
    for idx, K in enumerate(cliques):
        K = set(K)
        if not K:
            raise ValueError("empty clique")
        if any(not 0 <= v < d for v in K):
            raise ValueError("clique vertex out of range")
        u = [0] * (k + d)
        u[idx] = 1
        for v in K:
            u[k + v] = 1
        out.append(Binomial(tuple(u), (0,) * (k + d)))
    return out


def toric_groebner(A, c, generators=None, tiebreak="lex", budget=None) -> tuple[list[Binomial], TermOrder]:
    from .exact import as_matrix

    A = as_matrix(A)
    order = cost_order(A, c, tiebreak)
    if generators is None:
        generators = toric_generators(A, budget)
    return buchberger(generators, order, budget), order


def initial_ideal(gb: Sequence[Binomial], order: TermOrder | None = None) -> list[Binomial]:
    """Generators of in_c: strict leads as monomials, tied binomials kept whole."""
    out = []
    for g in gb:
        if g.trail is not None and g.tied:
            out.append(g)
        else:
            out.append(Binomial(g.lead))
    return out


def is_monomial_ideal(gens: Sequence[Binomial]) -> bool:
    return all(g.is_monomial for g in gens)


def mono_of_initial(init_gens: Sequence[Binomial], order: TermOrder | None = None, budget=None) -> list[Exponent]:
    """Minimal generators of the largest monomial ideal inside <init_gens>.

    Each binomial x^u - x^v (disjoint supports) is homogenized to
    x^u X^v - x^v X^u with partner variables X; adding t * prod X - 1 and
    eliminating (t, X) leaves a monomial ideal in the x variables.
    """
    init_gens = list(init_gens)
    if not init_gens:
        return []
    if is_monomial_ideal(init_gens):
        return minimalize(g.lead for g in init_gens)
    n = len(init_gens[0].lead)
    zero = (0,) * n
    gens = []
    for g in init_gens:
        if g.trail is None:
            gens.append((g.lead + zero + (0,), None))
        else:
            u, v = g.lead, g.trail
            common = tuple(min(a, b) for a, b in zip(u, v))
            u = tuple(a - m for a, m in zip(u, common))
            v = tuple(a - m for a, m in zip(v, common))
            gens.append((tuple(a + m for a, m in zip(u, common)) + v + (0,),
                         tuple(a + m for a, m in zip(v, common)) + u + (0,)))
    gens.append(((0,) * n + (1,) * n + (1,), (0,) * (2 * n + 1)))
    elim = TermOrder(2 * n + 1, [[0] * n + [1] * (n + 1)], "grevlex")
    gb = buchberger(gens, elim, budget)
    monos = []
    for g in gb:
        if any(g.lead[n:]):
            continue
        if g.trail is not None and any(g.trail[n:]):
            continue
        if g.trail is not None:
            raise AssertionError("elimination ideal is not monomial")
        monos.append(g.lead[:n])
    return minimalize(monos)


def is_squarefree(monos: Iterable) -> bool:
    return all(all(a <= 1 for a in (m.lead if isinstance(m, Binomial) else m)) for m in monos)


def same_monomial_ideal(gens1: Iterable[Exponent], gens2: Iterable[Exponent]) -> bool:
    """Equality of monomial ideals by mutual divisibility."""
    g1, g2 = list(gens1), list(gens2)
    return all(any(divides(h, g) for h in g2) for g in g1) and all(
        any(divides(h, g) for h in g1) for g in g2
    )


# -- oracles and checks ----------------------------------------------------

def nonoptimal_monomial_oracle(p, box: int, ip=None) -> list[Exponent]:
    """Minimal generators of <x^w : w not optimal for IP(A w)>, w in {0..box}^n.

    Exhaustive; only monomials inside the box are seen, so the result is
    exact when every minimal generator fits in the box.
    """
    from .oracle import ip_optimum

    n = p.n
    cols = p.columns
    bad = []
    best: dict = {}
    for w in product(range(box + 1), repeat=n):
        if any(divides(g, w) for g in bad):
            continue
        b = tuple(sum(cols[j][i] * w[j] for j in range(n)) for i in range(p.d))
        if b not in best:
            best[b] = ip_optimum(p, b)[0] if ip is None else ip(b)
        if dot(p.c, w) > best[b]:
            bad.append(w)
    return minimalize(bad)


def nonoptimal_generators(p, generators=None, tiebreak="lex", budget=None) -> list[Exponent]:
    """mono(in_c(I_A)) for the problem p."""
    gb, order = toric_groebner(p.A, p.c, generators, tiebreak, budget)
    return mono_of_initial(initial_ideal(gb, order), order, budget)


def check_condition_v(p, generators=None, tiebreak="lex", budget=None) -> bool:
    return is_squarefree(nonoptimal_generators(p, generators, tiebreak, budget))


def gb_augment(gb: Sequence[Binomial], order: TermOrder, u: Sequence[int], skip: int | None = None) -> tuple:
    """Reduce x^u by the basis (skipping element ``skip``) to its normal form."""
    B = _Basis(order)
    B.polys = list(gb)
    r = B._reduce_term(tuple(u), skip)
    if r is None:
        raise ValueError("basis contains a monomial; IP fibre reduction undefined")
    return r


def conti_traverso_crosscheck(p, box: int, gb=None, order=None, ip=None) -> bool:
    """GB reduction solves every IP started in the box, and no element is redundant.

    Requires c generic (monomial initial ideal) and every lead inside the
    box, since otherwise minimality cannot be seen.  For each x in {0..box}^n
    the normal form must be optimal for IP(A x); for each GB element g
    there must be such an x whose fibre is not solved without g.
    """
    from .oracle import ip_optimum

    if gb is None:
        gb, order = toric_groebner(p.A, p.c)
    if any(g.tied for g in gb):
        raise ValueError("cost vector is not generic")
    if any(max(g.lead) > box for g in gb):
        raise ValueError("box too small: some leading term does not fit")
    # monomials x^u in the GB would mean a whole fibre is empty of 1s; for
    # toric ideals of full column rank configs they do not occur
    if any(g.trail is None for g in gb):
        return False
    cols = p.columns
    best: dict = {}
    needed = [False] * len(gb)
    for x in product(range(box + 1), repeat=p.n):
        b = tuple(sum(cols[j][i] * x[j] for j in range(p.n)) for i in range(p.d))
        if b not in best:
            best[b] = ip_optimum(p, b)[0] if ip is None else ip(b)
        if dot(p.c, gb_augment(gb, order, x)) != best[b]:
            return False
        for k in range(len(gb)):
            if not needed[k] and divides(gb[k].lead, x):
                if dot(p.c, gb_augment(gb, order, x, skip=k)) != best[b]:
                    needed[k] = True
    return all(needed)
