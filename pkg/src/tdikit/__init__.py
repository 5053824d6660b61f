"""Exact decision and certification of total dual integrality.

Every number is an int or a Fraction; nothing touches floating point.
"""

from .exact import IntegerMatrix, determinant, hermite_normal_form, integer_kernel_basis, rank
from .geometry import (
    Cell,
    Problem,
    ProblemError,
    Subdivision,
    dual_vertices,
    is_refinement,
    is_triangulation,
    is_unimodular,
    lexicographic_subdivision,
    lp_solve,
    minimal_cell_containing,
    regular_subdivision,
)
from .hilbert import Cone, cells_are_hilbert, hilbert_basis, is_hilbert_basis
from .oracle import ip_optimum
from .setpacking import Graph, build_system, lex_greedy_optimum, maximal_cliques, perfectness_check, perturb
from .testset import (
    Certificate,
    TestSet,
    TestVector,
    brute_force_tdi,
    build_test_set,
    find_wheels,
    ipsolve,
    tdi_check_via_cells,
    tdi_check_via_testset,
    tdi_check_via_toric,
)
from .toric import (
    Binomial,
    TermOrder,
    check_condition_v,
    initial_ideal,
    mono_of_initial,
    toric_generators,
    toric_groebner,
)

__version__ = "0.1.0"
