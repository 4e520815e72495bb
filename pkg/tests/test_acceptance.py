"""Acceptance criteria 1-10, each marked with its number.

The conftest summary hook prints one ``criterion N: PASS/FAIL`` line per
criterion at the end of the run.  Criteria 5-9 read the report of a single
``verify all`` run with the default configuration (20 seeded points,
lambda = 1/10), which is also the run timed for criterion 10.
"""
import random
import time

import pytest
from gmpy2 import mpq

import test_algebra
import test_calculus
from gkred.algebra import Scalar
from gkred.calculus import Chart
from gkred.config import RunConfig
from gkred.cp2 import _random_mc_deformation, cmd_verify_all, known_solutions, three_lines
from gkred.gk import (
    Deformation, appendix_display, bracket_minus, deformed_frames, displayed_cubic, dmu_contraction, mc_is_zero,
    mc_residual, proportionality, sphere_moment_map, tau01_sections, type_locus,
)

C3 = Chart(3)
z = [C3.z(k) for k in range(3)]
TENTH = Scalar(mpq(1, 10))
SOL = known_solutions(C3, TENTH)
MU = sphere_moment_map(C3)
PAIRS = [(1, 1), (1, 2), (2, 1), (2, 2)]


@pytest.fixture(scope="module")
def appendix_brackets():
    start = time.perf_counter()
    df = deformed_frames(SOL["solution (ii)"])
    A, B = tau01_sections(df)
    brackets = {(i, j): bracket_minus(A[i - 1], B[j - 1], df) for i, j in PAIRS}
    return df, brackets, time.perf_counter() - start


@pytest.fixture(scope="module")
def full_run():
    cfg = RunConfig()
    start = time.perf_counter()
    report = cmd_verify_all(cfg)
    return cfg, {c.name: c for c in report.checks}, time.perf_counter() - start


def _residual(checks, name, below):
    c = checks[name]
    assert c.exact_or_numeric == "numeric"
    assert c.residual < below, f"{name}: {c.residual:.3e} >= {below:g}"
    assert c.passed


@pytest.mark.criterion(1)
@pytest.mark.parametrize("i", [1, 2])
def test_appendix_brackets_equal_displayed_closed_forms(appendix_brackets, i):
    df, brackets, elapsed = appendix_brackets
    assert (brackets[(i, 1)] - appendix_display(df, i)).is_zero()
    assert elapsed < 30


@pytest.mark.criterion(2)
@pytest.mark.parametrize("i,j", PAIRS)
def test_dmu_contractions_are_zero_polynomials(appendix_brackets, i, j):
    _, brackets, _ = appendix_brackets
    assert dmu_contraction(brackets[(i, j)], MU).is_zero()


@pytest.mark.criterion(3)
@pytest.mark.parametrize("name", ["solution (i)", "solution (ii)"])
def test_known_solutions_have_zero_mc_residual(name):
    assert mc_is_zero(mc_residual(SOL[name]))


@pytest.mark.criterion(3)
def test_mc_negative_control_is_nonzero():
    assert not mc_is_zero(mc_residual(Deformation(C3, [z[0] * z[0], z[1] * z[1], 0], [1, 1, 1], TENTH)))


@pytest.mark.criterion(4)
def test_solution_ii_locus_divides_by_three_lines():
    rho = type_locus(SOL["solution (ii)"]).rho
    q = rho.exact_div(three_lines(C3))
    assert q.is_const() and not q.is_zero()
    assert q * three_lines(C3) == rho


@pytest.mark.criterion(4)
def test_displayed_cubic_matches_spinor_locus_for_random_deformations():
    rng = random.Random(2024)
    for _ in range(3):
        d = _random_mc_deformation(C3, rng, TENTH)
        assert mc_is_zero(mc_residual(d))
        rho = type_locus(d).rho
        cubic = displayed_cubic(d)
        assert not cubic.is_zero()
        c = proportionality(rho, cubic)
        assert c is not None and not c.is_zero()


@pytest.mark.criterion(5)
@pytest.mark.parametrize("case", ["undeformed", "deformed"])
def test_reduced_torsion_two_routes_agree(full_run, case):
    cfg, checks, _ = full_run
    assert cfg.points == 20 and cfg.lam == "1/10"
    _residual(checks, f"reduction: {case}: H~ via gamma vs via Omega", 1e-8)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("case", ["undeformed", "deformed"])
def test_reduced_curvature_closed_form_matches_direct(full_run, case):
    _, checks, _ = full_run
    _residual(checks, f"reduction: {case}: curvature closed form vs direct (relative)", 1e-7)


@pytest.mark.criterion(6)
def test_undeformed_quotient_is_kahler(full_run):
    _, checks, _ = full_run
    _residual(checks, "reduction: undeformed: curvature pair symmetry (Kahler quotient)", 1e-9)
    _residual(checks, "reduction: undeformed: H~ vanishes (Kahler quotient)", 1e-9)


@pytest.mark.criterion(7)
@pytest.mark.parametrize("case", ["undeformed", "deformed"])
@pytest.mark.parametrize("routes", ["definition vs formula", "formula vs ambient", "definition vs ambient"])
def test_relative_curvature_routes_agree(full_run, case, routes):
    _, checks, _ = full_run
    _residual(checks, f"reduction: {case}: relative curvature {routes}", 1e-8)


@pytest.mark.criterion(7)
def test_relative_curvature_vanishes_on_mixed_pairs(full_run):
    _, checks, _ = full_run
    _residual(checks, "gk: relative curvature on mixed (0,1) pairs", 1e-9)


@pytest.mark.criterion(8)
def test_graph_bismut_equals_direct_construction(full_run):
    _, checks, _ = full_run
    c = checks["reduction: graph Bismut connection equals nabla +/- 1/2 g^-1 H (5 random metrics)"]
    assert c.exact_or_numeric == "exact" and c.passed


@pytest.mark.criterion(8)
@pytest.mark.parametrize("case", ["undeformed", "deformed"])
def test_reduced_bismut_connections(full_run, case):
    _, checks, _ = full_run
    _residual(checks, f"reduction: {case}: nabla~^+ - nabla~^- equals H~", 1e-9)
    _residual(checks, f"reduction: {case}: nabla~^+ metric compatibility", 1e-9)
    _residual(checks, f"reduction: {case}: nabla~^- metric compatibility", 1e-9)


@pytest.mark.criterion(9)
def test_hamiltonian_condition(full_run):
    _, checks, _ = full_run
    _residual(checks, "gk: Hamiltonian condition (xi = -i_V b)", 1e-9)
    control = checks["gk: negative control: perturbed moment map mu + z0 zb1"]
    assert control.residual > 1e-3 and control.passed


PROPERTIES = [
    test_algebra.test_scalar_field_axioms,
    test_algebra.test_poly_ring_axioms,
    test_algebra.test_ratfunc_field_axioms,
    test_calculus.test_jacobi_identity,
    test_calculus.test_cartan_formula,
    test_calculus.test_d_squared_is_zero,
    test_calculus.test_clifford_relation,
]


@pytest.mark.criterion(10)
@pytest.mark.parametrize("prop", PROPERTIES, ids=lambda p: p.__name__)
def test_property_suite_runs_200_cases(prop):
    inner = prop.hypothesis.inner_test
    count = 0

    def counted(*args, **kwargs):
        nonlocal count
        count += 1
        return inner(*args, **kwargs)

    prop.hypothesis.inner_test = counted
    try:
        prop()
    finally:
        prop.hypothesis.inner_test = inner
    assert count >= 200


@pytest.mark.criterion(10)
def test_verify_all_wall_time(full_run):
    _, checks, elapsed = full_run
    assert all(c.status != "fail" for c in checks.values())
    assert elapsed < 600
