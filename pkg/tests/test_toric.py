from itertools import product

import pytest

from tdikit.geometry import Problem, is_triangulation, is_unimodular, regular_subdivision
from tdikit.setpacking import Graph, build_system, perturb
from tdikit.testset import TDI, brute_force_tdi, minimal_noncells
from tdikit.toric import (
    Binomial,
    TermOrder,
    check_condition_v,
    conti_traverso_crosscheck,
    divides,
    initial_ideal,
    is_groebner,
    is_reduced,
    is_squarefree,
    minimalize,
    mono_of_initial,
    nonoptimal_generators,
    nonoptimal_monomial_oracle,
    reduce_by,
    same_monomial_ideal,
    setpacking_toric_generators,
    toric_generators,
    toric_groebner,
)

from conftest import random_problems


def names_of(sys):
    names = sys.variable_names()

    def fmt(u):
        return "*".join(names[j] + (f"^{u[j]}" if u[j] > 1 else "") for j in range(len(u)) if u[j]) or "1"

    return fmt


def apply(A, u):
    return tuple(sum(row[j] * u[j] for j in range(len(u))) for row in A.rows)


@pytest.fixture(scope="module")
def k2():
    return build_system(Graph(2, [(0, 1)]))


@pytest.fixture(scope="module")
def chordal_gb(chordal10):
    p = chordal10.problem
    gens = setpacking_toric_generators(chordal10.cliques, 10)
    gb, order = toric_groebner(p.A, p.c, gens)
    return gb, order


class TestMonomialHelpers:
    def test_minimalize(self):
        assert minimalize([(1, 1), (1, 0), (2, 0), (0, 3)]) == [(0, 3), (1, 0)]

    def test_squarefree(self):
        assert not is_squarefree([(2,)])
        assert is_squarefree([])
        assert is_squarefree([(1, 0, 1)])

    def test_same_ideal(self):
        assert same_monomial_ideal([(1, 0), (1, 1)], [(1, 0)])
        assert not same_monomial_ideal([(1, 0)], [(0, 1)])

    def test_weights_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            TermOrder(2, [[1, -1]])


class TestSetPackingGenerators:
    def test_examples(self):
        assert setpacking_toric_generators([(0, 1)], 2) == [Binomial((1, 1, 1), (0, 0, 0))]
        assert setpacking_toric_generators([(0,)], 1) == [Binomial((1, 1), (0, 0))]
        with pytest.raises(ValueError):
            setpacking_toric_generators([()], 1)

    def test_chordal_count(self, chordal10):
        gens = setpacking_toric_generators(chordal10.cliques, 10)
        assert len(gens) == 6
        for g in gens:
            assert apply(chordal10.problem.A, g.lead) == (0,) * 10


class TestK2:
    def test_groebner(self, k2):
        p = k2.problem
        assert p.c == (1, 0, 0)
        gens = setpacking_toric_generators(k2.cliques, 2)
        gb, order = toric_groebner(p.A, p.c, gens)
        assert gb == [Binomial((1, 1, 1), (0, 0, 0))]
        init = initial_ideal(gb, order)
        assert [g.lead for g in init] == [(1, 1, 1)] and init[0].is_monomial
        assert mono_of_initial(init, order) == [(1, 1, 1)]
        assert check_condition_v(p, gens)

    def test_oracle(self, k2):
        assert nonoptimal_monomial_oracle(k2.problem, 3) == [(1, 1, 1)]

    def test_conti_traverso(self, k2):
        assert conti_traverso_crosscheck(k2.problem, 3)


class TestWorkedExample:
    def test_unperturbed_basis(self, chordal10, chordal_gb):
        gb, order = chordal_gb
        fmt = names_of(chordal10)
        strict = [g for g in gb if not g.tied]
        tied = [g for g in gb if g.tied]
        assert [fmt(g.lead) for g in strict] == ["f*v7*v8"]
        assert len(tied) == 5
        assert is_groebner(gb, order) and is_reduced(gb)

    def test_perturbed_leads(self, chordal10):
        p = chordal10.problem
        gens = setpacking_toric_generators(chordal10.cliques, 10)
        gb, order = toric_groebner(p.A, perturb(chordal10, sign=1), gens)
        fmt = names_of(chordal10)
        leads = sorted(fmt(g.lead) for g in gb)
        assert leads == sorted(["f*v7*v8", "e*v5*v6*v10", "d*v2*v9", "c*v4", "b*v3", "a*v1"])
        assert not any(g.tied for g in gb)
        assert is_squarefree(g.lead for g in initial_ideal(gb, order))

    def test_fourteen_generators(self, chordal10, chordal_gb):
        gb, order = chordal_gb
        fmt = names_of(chordal10)
        got = sorted(fmt(u) for u in mono_of_initial(initial_ideal(gb, order), order))
        want = sorted([
            "a*v1*v2", "b*c*v2*v3*v4", "b*v2*v3*v5", "c*v2*v4*v6", "b*f*v2*v3*v8",
            "c*f*v2*v4*v8", "f*v7*v8", "d*v2*v5*v6*v9", "d*f*v2*v8*v9", "a*e*v1*v7*v10",
            "b*c*e*v3*v4*v7*v10", "b*e*v3*v5*v7*v10", "c*e*v4*v6*v7*v10", "e*v5*v6*v7*v10",
        ])
        assert got == want

    def test_generators_are_minimal_noncells(self, chordal10, chordal_gb):
        gb, order = chordal_gb
        mono = mono_of_initial(initial_ideal(gb, order), order)
        p = chordal10.problem
        taus = minimal_noncells(p, regular_subdivision(p))
        assert sorted(tuple(int(j in t) for j in range(p.n)) for t in taus) == sorted(mono)

    def test_oracle_restricted_box(self, chordal10, chordal_gb):
        # a box of 1 sees only 0-1 vectors, which is where all 14 generators live
        gb, order = chordal_gb
        mono = mono_of_initial(initial_ideal(gb, order), order)
        p = chordal10.problem
        bad = []
        for w in product((0, 1), repeat=p.n):
            if any(divides(g, w) for g in bad):
                continue
            if any(divides(g, w) for g in mono):
                bad.append(w)
        assert minimalize(bad) == sorted(mono)


class TestBuchberger:
    def test_random_groebner_and_reduced(self):
        for p in random_problems(41, 40, nmax=5):
            gb, order = toric_groebner(p.A, p.c)
            assert is_groebner(gb, order)
            assert is_reduced(gb)
            for g in gb:
                assert g.trail is not None
                assert apply(p.A, g.lead) == apply(p.A, g.trail)
                assert all(min(a, b) == 0 for a, b in zip(g.lead, g.trail))

    def test_fibres_have_one_normal_form(self):
        # x^u - x^v lies in I_A exactly when A u = A v
        for p in random_problems(42, 25, nmax=4):
            gb, order = toric_groebner(p.A, p.c)
            nf = {}
            for u in product(range(3), repeat=p.n):
                b = apply(p.A, u)
                r = reduce_by(gb, order, u)
                assert nf.setdefault(b, r) == r, (p, u)

    def test_generators_lie_in_kernel(self):
        for p in random_problems(43, 30, nmax=5):
            for g in toric_generators(p.A):
                assert apply(p.A, g.lead) == apply(p.A, g.trail)


class TestMonoOfInitial:
    def test_monomial_input(self):
        gens = [Binomial((1, 1)), Binomial((1, 0))]
        assert mono_of_initial(gens) == [(1, 0)]
        assert mono_of_initial([]) == []

    def test_pure_binomial(self):
        # <x - y> contains no monomial
        assert mono_of_initial([Binomial((1, 0), (0, 1), tied=True)]) == []

    def test_matches_nonoptimal_oracle(self):
        box = 3
        checked = 0
        for p in random_problems(44, 15, dmax=2, nmax=4, cost="mixed"):
            mono = nonoptimal_generators(p)
            inside = [g for g in mono if max(g) <= box]
            assert nonoptimal_monomial_oracle(p, box) == inside, p
            checked += 1
        assert checked == 15

    def test_tdi_means_minimal_noncells(self):
        found = 0
        for p in random_problems(45, 120, dmax=2, nmax=5, hilbert=True):
            if brute_force_tdi(p, box=4).verdict != TDI:
                continue
            found += 1
            mono = nonoptimal_generators(p)
            taus = minimal_noncells(p, regular_subdivision(p))
            assert sorted(tuple(int(j in t) for j in range(p.n)) for t in taus) == mono
            assert is_squarefree(mono)
        assert found >= 20


class TestGeneric:
    def test_unimodular_iff_squarefree(self):
        seen = 0
        for p in random_problems(46, 200, nmax=5):
            gb, order = toric_groebner(p.A, p.c)
            generic = not any(g.tied for g in gb)
            s = regular_subdivision(p)
            # a monomial initial ideal forces a triangulation; IP fibres can
            # still tie when the LP subdivision is already a triangulation
            if not generic:
                continue
            assert is_triangulation(s), p
            seen += 1
            init = initial_ideal(gb, order)
            assert is_unimodular(s)[0] == is_squarefree(g.lead for g in init), p
        assert seen >= 50


class TestConditionV:
    def test_wheel(self, triangle_wheel):
        assert check_condition_v(triangle_wheel)

    def test_five_cycle(self):
        sys = build_system(Graph.cycle(5))
        gens = setpacking_toric_generators(sys.cliques, 5)
        assert not check_condition_v(sys.problem, gens)


class TestContiTraverso:
    def test_random_generic(self):
        done = 0
        for p in random_problems(47, 60, nmax=4):
            gb, order = toric_groebner(p.A, p.c)
            if any(g.tied for g in gb) or any(max(g.lead) > 3 for g in gb):
                continue
            assert conti_traverso_crosscheck(p, 3, gb, order)
            done += 1
            if done == 10:
                break
        assert done == 10

    def test_truncated_basis_fails(self):
        p = Problem([[1, 1, 1], [0, 1, 2]], [0, 1, 3])
        gb, order = toric_groebner(p.A, p.c)
        assert len(gb) >= 1
        assert conti_traverso_crosscheck(p, 3, gb, order)
        assert not conti_traverso_crosscheck(p, 3, gb[1:], order)

    def test_box_too_small(self):
        p = Problem([[0, 2, 1], [2, -1, -2]], [0, 3, 3])
        with pytest.raises(ValueError):
            conti_traverso_crosscheck(p, 3)

    def test_non_generic_rejected(self):
        p = Problem([[1, 1]], [0, 0])
        with pytest.raises(ValueError):
            conti_traverso_crosscheck(p, 2)
