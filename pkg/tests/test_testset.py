import json
import random
from fractions import Fraction

import pytest

from tdikit.geometry import Problem, lp_solve, regular_subdivision
from tdikit.hilbert import cells_are_hilbert
from tdikit.oracle import ip_optimum
from tdikit.setpacking import Graph, build_system
from tdikit.testset import (
    NOT_TDI,
    TDI,
    Certificate,
    NotHilbertError,
    TestSet,
    TestVector,
    augment,
    brute_force_tdi,
    build_test_set,
    find_feasible,
    find_wheels,
    ipsolve,
    minimal_noncells,
    tdi_check_via_cells,
    tdi_check_via_testset,
    tdi_check_via_toric,
    uncovered_nonoptimal,
    zero_sum_subsets,
)

from conftest import random_problems


def apply(p, x):
    return tuple(sum(p.columns[j][i] * x[j] for j in range(p.n)) for i in range(p.d))


class TestWheels:
    def test_triangle(self, triangle_wheel):
        assert [w.kappa for w in find_wheels(triangle_wheel)] == [(0, 1, 2)]

    def test_pointed_has_none(self):
        for p in random_problems(51, 30):
            if lp_solve(p, (0,) * p.d).optimal_cell.indices:
                continue
            # only the zero solution solves A x = 0, x >= 0
            if not zero_sum_subsets(p):
                assert find_wheels(p) == []

    def test_set_packing_one_per_clique(self):
        # a clique column plus the slack columns of its vertices sums to zero
        for g in (Graph.cycle(4), Graph.cycle(5), Graph.path(4), Graph.complete(3)):
            sys = build_system(g)
            want = sorted(tuple([i] + [sys.k + v for v in K]) for i, K in enumerate(sys.cliques))
            assert [w.kappa for w in find_wheels(sys.problem)] == want

    def test_zero_sum_subsets(self, triangle_wheel):
        assert zero_sum_subsets(triangle_wheel) == [(0, 1, 2)]
        p = Problem([[1, -1, 1, -1]], [1, 1, 1, 1])
        assert sorted(zero_sum_subsets(p)) == [(0, 1), (0, 1, 2, 3), (0, 3), (1, 2), (2, 3)]


class TestBuild:
    def test_triangle(self, triangle_wheel):
        t = build_test_set(triangle_wheel)
        assert [v.vector() for v in t] == [(1, 1, 1)]
        assert t.vectors[0].tag == "wheel"

    def test_identity_is_empty(self):
        assert len(build_test_set(Problem([[1, 0], [0, 1]], [0, 0]))) == 0

    def test_third_column_shortcut(self):
        p = Problem([[1, 0, 1], [0, 1, 1]], [1, 1, 1])
        vecs = [v.vector() for v in build_test_set(p)]
        assert (1, 1, -1) in vecs

    def test_not_hilbert(self):
        p = Problem([[1, 1, -1], [0, 2, 0]], [0, 0, 1], check=False)
        with pytest.raises(NotHilbertError):
            build_test_set(p)

    def test_vectors_are_valid(self):
        for p in random_problems(52, 40, hilbert=True):
            t = build_test_set(p)
            if isinstance(t, Certificate):
                continue
            s = regular_subdivision(p)
            for v in t:
                v.check(p)
                # beta lives inside a single cell
                assert s.contains_set(j for j in range(p.n) if v.minus[j])
                assert not s.contains_set(v.support)
            assert {v.support for v in t} == set(minimal_noncells(p, s))

    def test_regression_hilbert_without_candidates(self):
        # A Hilbert basis with no independent non-cell and no wheel, yet not TDI:
        # b = -1 has LP value 0 but IP value 2
        p = Problem([[1, -2]], [2, 0])
        assert brute_force_tdi(p, 3).verdict == NOT_TDI
        assert tdi_check_via_testset(p).verdict == NOT_TDI
        assert lp_solve(p, (-1,)).value == 0 and ip_optimum(p, (-1,))[0] == 2

    def test_regression_dependent_noncell(self):
        # TDI, and the non-optimal (1,1,0,0) is only caught by the dependent set {0,1}
        p = Problem([[-2, 1, -1, -2]], [0, 3, 0, 1])
        assert brute_force_tdi(p, 4).verdict == TDI
        cert = tdi_check_via_testset(p)
        assert cert.is_tdi
        t = cert.witness["test_set"]
        assert any(v.plus == (1, 1, 0, 0) for v in t)
        assert uncovered_nonoptimal(p, t) is None


class TestAugment:
    def test_wheel(self, triangle_wheel):
        t = build_test_set(triangle_wheel)
        assert augment(triangle_wheel, t, (2, 2, 2)) == (0, 0, 0)

    def test_optimal_fixed(self, triangle_wheel):
        t = build_test_set(triangle_wheel)
        assert augment(triangle_wheel, t, (1, 1, 0)) == (1, 1, 0)

    def test_order_does_not_change_value(self):
        rng = random.Random(3)
        for p in random_problems(53, 40, hilbert=True):
            t = build_test_set(p)
            if isinstance(t, Certificate):
                continue
            for _ in range(3):
                u = tuple(rng.randint(0, 3) for _ in range(p.n))
                ref = augment(p, t, u)
                vecs = list(t)
                rng.shuffle(vecs)
                alt = augment(p, vecs, u)
                assert apply(p, alt) == apply(p, u)
                assert sum(p.c[j] * alt[j] for j in range(p.n)) == sum(p.c[j] * ref[j] for j in range(p.n))
                assert sum(p.c[j] * ref[j] for j in range(p.n)) == ip_optimum(p, apply(p, u))[0]

    def test_worked_example(self, chordal10):
        p = chordal10.problem
        cert = tdi_check_via_testset(p)
        assert cert.is_tdi and len(cert.witness["test_set"]) == 14
        u = (1,) * 6 + (0,) * 10
        b = apply(p, u)
        x = augment(p, cert.witness["test_set"], u)
        assert apply(p, x) == b
        assert sum(p.c[j] * x[j] for j in range(p.n)) == ip_optimum(p, b)[0]


class TestAgreement:
    def test_four_routes(self):
        seen = {True: 0, False: 0}
        for p in random_problems(54, 40, hilbert=True):
            brute = brute_force_tdi(p, 4)
            cells = cells_are_hilbert(p, regular_subdivision(p))[0]
            ts = tdi_check_via_testset(p)
            tor = tdi_check_via_toric(p)
            assert brute.is_tdi == cells == ts.is_tdi == tor.is_tdi, p
            assert ts.verify(p)
            if not brute.is_tdi:
                assert brute.verify(p)
            else:
                assert uncovered_nonoptimal(p, ts.witness["test_set"]) is None
            seen[brute.is_tdi] += 1
        assert seen[True] >= 5 and seen[False] >= 5

    def test_non_hilbert_is_not_tdi(self):
        p = Problem([[1, 1, -1], [0, 2, 0]], [0, 0, 1], check=False)
        assert tdi_check_via_testset(p).verdict == NOT_TDI


class TestBrute:
    def test_double_column(self):
        p = Problem([[1, 1], [0, 2]], [0, 0], check=False)
        cert = brute_force_tdi(p)
        assert cert.verdict == NOT_TDI
        assert cert.witness["b"] == [1, 1]
        assert cert.witness["ip_value"] is None

    def test_four_cycle(self):
        assert brute_force_tdi(build_system(Graph.cycle(4)).problem, 3).is_tdi

    def test_five_cycle(self):
        p = build_system(Graph.cycle(5)).problem
        cert = brute_force_tdi(p, 2)
        assert cert.verdict == NOT_TDI
        assert cert.verify(p)
        # the all-ones right-hand side: fractional LP value 5/2, integer value 3
        assert lp_solve(p, (1,) * 5).value == Fraction(5, 2)
        assert ip_optimum(p, (1,) * 5)[0] == 3
        assert tdi_check_via_testset(p).verdict == NOT_TDI
        assert tdi_check_via_cells(p).verdict == NOT_TDI


class TestCertificate:
    def test_round_trip_and_verify(self, triangle_wheel):
        for cert in (
            tdi_check_via_testset(triangle_wheel),
            tdi_check_via_cells(triangle_wheel),
            brute_force_tdi(triangle_wheel, 3),
        ):
            text = json.dumps(cert.to_json(), sort_keys=True)
            back = Certificate.from_json(text)
            assert back.verdict == cert.verdict == TDI
            assert back.verify(triangle_wheel)

    def test_not_tdi_round_trip(self):
        p = build_system(Graph.cycle(5)).problem
        for cert in (tdi_check_via_testset(p), tdi_check_via_cells(p)):
            back = Certificate.from_json(json.dumps(cert.to_json()))
            assert back.verdict == NOT_TDI and back.verify(p)

    def test_forged_witness_rejected(self, triangle_wheel):
        fake = Certificate(NOT_TDI, "brute", {"b": [1, 1], "lp_value": "2", "ip_value": "2"})
        assert not fake.verify(triangle_wheel)
        bad = TestSet([TestVector((1, 1, 0), (0, 0, 0), "wheel", (0, 1))])
        assert not Certificate(TDI, "testset", {"test_set": bad}).verify(triangle_wheel)


class TestIPSolve:
    def test_against_oracle(self):
        rng = random.Random(9)
        pairs = 0
        for p in random_problems(55, 30, cost="mixed"):
            for _ in range(3):
                b = tuple(rng.randint(-3, 3) for _ in range(p.d))
                v, x = ipsolve(p, b)
                ref = ip_optimum(p, b)[0]
                assert v == ref, (p, b)
                if x is not None:
                    assert apply(p, x) == b and min(x) >= 0
                pairs += 1
        assert pairs == 90

    def test_methods(self, triangle_wheel):
        assert ipsolve(triangle_wheel, (1, 1), method="testset") == (2, (1, 1, 0))
        assert ipsolve(triangle_wheel, (1, 1), method="groebner")[0] == 2
        assert ipsolve(triangle_wheel, (3, 3))[0] == 6

    def test_testset_method_needs_tdi(self):
        p = build_system(Graph.cycle(5)).problem
        with pytest.raises(ValueError):
            ipsolve(p, (1,) * 5, method="testset")
        assert ipsolve(p, (1,) * 5)[0] == 3

    def test_infeasible(self):
        p = Problem([[1, 1]], [1, 1])
        assert ipsolve(p, (-1,)) == (None, None)
        assert find_feasible(p, (-1,)) is None
