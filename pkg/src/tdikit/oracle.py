"""Exhaustive integer programming at desk scale.

Used as the independent reference for every IP claim in the package.
Three exact methods:

* pointed cone(A): enumerate the fibre {x in N^n : A x = b} by a
  memoized column-by-column search bounded by a strictly positive
  functional;
* no nonzero k >= 0 with A k = 0 and c k = 0: a cap c x <= t bounds every
  coordinate; t rises from the LP value to the cost of a feasible point
  from semigroup search, with a memoized search in each box (used while
  the box is smaller than the region below);
* otherwise: Dijkstra over lattice points with arc costs c_j - y a_j >= 0
  for a dual feasible y.  Some optimal x can be ordered so that all partial
  sums stay within 2 d M (l_inf) of the segment [0, b], where M bounds the
  column norms, so the search is confined to that region.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import floor, lcm
from typing import Sequence

from .exact import dot
from .linprog import linprog, simplex


def positive_functional(p) -> tuple[int, ...] | None:
    """Integral w with w . a_j >= 1 for all columns, if cone(A) is pointed."""
    key = ("_posfun",)
    cache = _cache(p)
    if key in cache:
        return cache[key]
    cols = p.columns
    sol = linprog(
        [sum(col[i] for col in cols) for i in range(p.d)],
        A_ub=[[-v for v in col] for col in cols],
        b_ub=[-1] * p.n,
        free=range(p.d),
    )
    w = None
    if sol.ok:
        L = lcm(*(v.denominator for v in sol.x))
        w = tuple(int(v * L) for v in sol.x)
    cache[key] = w
    return w


_CACHES: dict = {}


def _cache(p) -> dict:
    k = (p.A, p.c)
    c = _CACHES.get(k)
    if c is None:
        if len(_CACHES) > 64:
            _CACHES.clear()
        c = _CACHES[k] = {}
    return c


def ip_optimum(p, b: Sequence[int]) -> tuple[Fraction | None, tuple[int, ...] | None]:
    """(optimal value, an optimal x) of min{c x : A x = b, x in N^n}.

    Returns (None, None) when there is no nonnegative integer solution.
    """
    b = tuple(int(v) for v in b)
    w = positive_functional(p)
    if w is not None:
        return _fibre_min(p, b, w)
    if _has_free_direction(p):
        return _dijkstra(p, b)
    return _levelled_min(p, b)


def _levelled_min(p, b):
    """Box search under c x <= t for t rising from the LP value.

    Every x with c x <= t lies in the box of coordinate maxima over
    {x >= 0 : A x = b, c x <= t}, so the first level whose box holds a
    solution of cost <= t yields the optimum.  The last level is the cost
    of a feasible point, which always succeeds.  Falls back to Dijkstra
    when a box outgrows the region that search would visit.
    """
    lp = simplex(p.A.rows, b, p.c)
    if not lp.ok:
        return None, None
    x0 = _incumbent(p, b)
    if x0 is None:
        return None, None
    U = dot(p.c, x0)
    R = _steinitz_radius(p)
    tube = (2 * R + 1) ** (p.d - 1) * (max(map(abs, b), default=0) + 2 * R + 1)
    unit = Fraction(1, lcm(*(v.denominator for v in p.c)))
    t, step = lp.value, unit
    while True:
        t = min(t, U)
        ub = _coordinate_bounds(p, b, t)
        box = 1
        for u in ub:
            box *= u + 1
        if box > tube:
            return _dijkstra(p, b)
        res = _bounded_min(p, b, ub)
        if res[0] is not None and res[0] <= t:
            return res
        if t == U:
            raise AssertionError("bounded search lost the incumbent")
        t = lp.value + step
        step *= 2


def _steinitz_radius(p) -> int:
    M = max(max(abs(v) for v in col) for col in p.columns)
    return 2 * p.d * M


def _has_free_direction(p) -> bool:
    """True if some nonzero k >= 0 has A k = 0 and c k = 0."""
    cache = _cache(p)
    if "free_dir" not in cache:
        A_eq = [list(r) for r in p.A.rows] + [list(p.c)]
        sol = linprog([1] * p.n, A_ub=[[int(i == j) for i in range(p.n)] for j in range(p.n)],
                      b_ub=[1] * p.n, A_eq=A_eq, b_eq=[0] * (p.d + 1), maximize=True)
        cache["free_dir"] = sol.value > 0
    return cache["free_dir"]


def _incumbent(p, b):
    """Some x in N^n with A x = b (exhaustive semigroup search), or None."""
    from .hilbert import Cone

    cache = _cache(p)
    cone = cache.get("cone")
    if cone is None:
        cone = cache["cone"] = Cone(p.A)
    return cone.semigroup_coefficients(b, local=False)


def _coordinate_bounds(p, b, U):
    """floor of max x_j over {x >= 0 : A x = b, c x <= U}, for each j."""
    rows = [list(r) + [0] for r in p.A.rows] + [list(p.c) + [1]]
    rhs = list(b) + [U]
    ub = []
    for j in range(p.n):
        cost = [0] * (p.n + 1)
        cost[j] = -1
        sol = simplex(rows, rhs, cost)
        ub.append(floor(-sol.value))
    return ub


def _bounded_min(p, b, ub):
    """min c x over the box x <= ub with A x = b, or (None, None).

    Interval pruning on the remaining right-hand side keeps the memoized
    recursion small.
    """
    cols = p.columns
    n, d, c = p.n, p.d, p.c
    lo = [[0] * d for _ in range(n + 1)]
    hi = [[0] * d for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        for i in range(d):
            v = cols[j][i] * ub[j]
            lo[j][i] = lo[j + 1][i] + min(0, v)
            hi[j][i] = hi[j + 1][i] + max(0, v)
    memo = {}

    def best(j, r):
        if j == n:
            return (Fraction(0), ()) if not any(r) else None
        key = (j, r)
        if key in memo:
            return memo[key]
        out = None
        cur = r
        for t in range(ub[j] + 1):
            if all(lo[j + 1][i] <= cur[i] <= hi[j + 1][i] for i in range(d)):
                sub = best(j + 1, cur)
                if sub is not None:
                    cost = t * c[j] + sub[0]
                    if out is None or cost < out[0]:
                        out = (cost, (t,) + sub[1])
            cur = tuple(a - e for a, e in zip(cur, cols[j]))
        memo[key] = out
        return out

    res = best(0, tuple(b))
    if res is None:
        return None, None
    return res


def _fibre_min(p, b, w):
    cols = p.columns
    n = p.n
    c = p.c
    weights = [dot(w, col) for col in cols]
    memo = _cache(p).setdefault("fibre", {})

    def best(j, r):
        # min cost of x_j..x_{n-1} with sum x_k a_k = r
        key = (j, r)
        if key in memo:
            return memo[key]
        wr = dot(w, r)
        out = None
        if j == n - 1:
            if wr % weights[j] == 0:
                t = wr // weights[j]
                if all(ri == t * ai for ri, ai in zip(r, cols[j])):
                    out = (t * c[j], (t,))
        elif wr == 0:
            if not any(r):
                out = (Fraction(0), (0,) * (n - j))
        else:
            t = 0
            cur = r
            while t * weights[j] <= wr:
                sub = best(j + 1, cur)
                if sub is not None:
                    cost = t * c[j] + sub[0]
                    if out is None or cost < out[0]:
                        out = (cost, (t,) + sub[1])
                t += 1
                cur = tuple(a - e for a, e in zip(cur, cols[j]))
        memo[key] = out
        return out

    if dot(w, b) < 0:
        return None, None
    res = best(0, b)
    if res is None:
        return None, None
    return res[0], res[1]


def _dijkstra(p, b):
    sol = simplex(p.A.rows, b, p.c)
    if not sol.ok:
        return None, None
    y = sol.y
    cols = p.columns
    red = [p.c[j] - dot(y, cols[j]) for j in range(p.n)]
    L = lcm(*(v.denominator for v in red))
    red = [int(v * L) for v in red]
    M = max(max(abs(v) for v in col) for col in cols)
    R = 2 * p.d * M
    d = p.d

    def near(z):
        # l_inf distance from z to the segment {s b : 0 <= s <= 1} is <= R
        lo, hi = Fraction(0), Fraction(1)
        for zi, bi in zip(z, b):
            # need |zi - s bi| <= R
            if bi == 0:
                if abs(zi) > R:
                    return False
                continue
            a1 = Fraction(zi - R, bi)
            a2 = Fraction(zi + R, bi)
            if a1 > a2:
                a1, a2 = a2, a1
            lo, hi = max(lo, a1), min(hi, a2)
            if lo > hi:
                return False
        return True

    start = (0,) * d
    dist = {start: 0}
    prev = {}
    heap = [(0, start)]
    while heap:
        dz, z = heapq.heappop(heap)
        if dz > dist[z]:
            continue
        if z == b:
            break
        for j, col in enumerate(cols):
            q = tuple(a + e for a, e in zip(z, col))
            nd = dz + red[j]
            if nd < dist.get(q, nd + 1) and near(q):
                dist[q] = nd
                prev[q] = (z, j)
                heapq.heappush(heap, (nd, q))
    if b not in dist:
        return None, None
    x = [0] * p.n
    z = b
    while z != start:
        z, j = prev[z]
        x[j] += 1
    return dot(p.c, x), tuple(x)


def lp_value(p, b) -> Fraction | None:
    sol = simplex(p.A.rows, list(b), p.c)
    return sol.value if sol.ok else None
