import random

import numpy as np
import pytest
from gmpy2 import mpq

from gkred.algebra import Scalar
from gkred.algebra.jets import JetSpace
from gkred.calculus import Chart, Form, ext_d, interior
from gkred.courant import FrameBundle
from gkred.cp2 import _random_mc_deformation, known_solutions, three_lines
from gkred.gk import (
    Deformation, NonIntegrable, appendix_display, appendix_identification, bracket_minus,
    bracket_minus_closed_form, deformed_frames, dmu_contraction, extract_bihermitian, hamiltonian_check,
    holomorphy_check, j_compatible, j_squares_to_minus_one, jet_bihermitian, mc_is_zero, mc_residual,
    non_hamiltonian_perturbation, rotation_field, sphere_moment_map, sphere_points, standard_kahler_form,
    standard_sections, tau01_sections, type_11_check, type_locus,
)
from gkred.metric import real_matrix

C3 = Chart(3)
z = [C3.z(k) for k in range(3)]
zb = [C3.zb(k) for k in range(3)]
TENTH = Scalar(mpq(1, 10))
SOL = known_solutions(C3, TENTH)
SOL_II = SOL["solution (ii)"]
E, F, Eb, Fb = standard_sections(C3)
MU = sphere_moment_map(C3)
PTS = sphere_points(0, 5)


@pytest.fixture(scope="module")
def df2():
    return deformed_frames(SOL_II)


# -- Maurer-Cartan

@pytest.mark.parametrize("name", ["solution (i)", "solution (ii)"])
def test_known_solutions_are_integrable(name):
    assert mc_is_zero(mc_residual(SOL[name]))


def test_broken_deformation_has_nonzero_residual():
    d = Deformation(C3, [z[0] * z[0], z[1] * z[1], 0], [1, 1, 1], 1)
    res = mc_residual(d)
    assert not mc_is_zero(res)
    r1, r2 = res[(0, 1)]
    assert r1.is_zero()
    assert r2 == z[0] * z[0] * z[1] * 2 - z[0] * z[1] * z[1] * 2
    with pytest.raises(NonIntegrable):
        deformed_frames(d)
    deformed_frames(d, allow_nonintegrable=True)


def test_random_difference_deformations_are_integrable():
    rng = random.Random(5)
    for _ in range(5):
        assert mc_is_zero(mc_residual(_random_mc_deformation(C3, rng, TENTH)))


def test_deformation_rejects_conjugate_variables():
    with pytest.raises(ValueError):
        Deformation(C3, [zb[0], 0, 0], [1, 1, 1])


# -- frames

def test_zero_deformation_gives_standard_frames():
    df = deformed_frames(Deformation(C3, [0, 0, 0], [1, 1, 1]))
    assert df.Lp == Eb
    assert df.Lm == Fb


def test_deformed_frames_match_displayed_spans(df2):
    f = SOL_II.f_eff
    Fsum = F[0] + F[1] + F[2]
    Csum = E[0] * f[0] + E[1] * f[1] + E[2] * f[2]
    for i in range(3):
        assert df2.Lp[i] == Eb[i] + Fsum * f[i]
        assert df2.Lm[i] == Fb[i] + Csum
        assert df2.tangent_01(1)[i] == C3.pzb(i) + (C3.pz(0) + C3.pz(1) + C3.pz(2)) * f[i]
    assert all(df2.certificates().values())


def test_rank_certificate_of_all_frames(df2):
    frame = FrameBundle(df2.Lp + df2.Lm + df2.Lp_bar + df2.Lm_bar, "all", seed=3)
    assert frame.certify_rank() == 12


# -- biHermitian extraction

def test_undeformed_extraction_is_flat():
    bh = extract_bihermitian(deformed_frames(Deformation(C3, [0, 0, 0], [1, 1, 1])))
    for i in range(6):
        for j in range(6):
            assert bh.g[i][j] == (1 if abs(i - j) == 3 else 0)
            assert bh.b[i][j].is_zero()
            assert bh.Jp[i][j] == bh.Jm[i][j]
            assert bh.Jp[i][j] == ((Scalar(0, 1) if i < 3 else Scalar(0, -1)) if i == j else 0)


def test_deformed_extraction_is_exact(df2):
    bh = extract_bihermitian(df2)
    assert j_squares_to_minus_one(bh.Jp) and j_squares_to_minus_one(bh.Jm)
    assert j_compatible(bh.Jp, bh.g) and j_compatible(bh.Jm, bh.g)
    for i in range(6):
        for j in range(6):
            assert bh.g[i][j] == bh.g[j][i]
            assert bh.b[i][j] == -bh.b[j][i]
    for s in df2.Lp:
        assert s.form == bh.metric.gvec(s.vec) + bh.metric.bvec(s.vec)
    for s in df2.Lm:
        assert s.form == bh.metric.bvec(s.vec) - bh.metric.gvec(s.vec)


def test_deformed_metric_is_positive_and_linear_in_lambda():
    d = {}
    p = PTS[0]
    w = np.concatenate([p, p.conj()])
    for lam in (Scalar(mpq(1, 100)), Scalar(mpq(1, 200))):
        js = JetSpace(w, 1)
        d[lam] = js.value(jet_bihermitian(deformed_frames(SOL_II.scaled(lam)), js).g)
        Gr = real_matrix(d[lam])
        assert np.linalg.eigvalsh(0.5 * (Gr + Gr.T).real).min() > 0
    flat = np.zeros((6, 6))
    flat[:3, 3:] = flat[3:, :3] = np.eye(3)
    a, b = (d[k] - flat for k in d)
    assert np.abs(a).max() > 1e-6
    # O(lambda): halving lambda halves the deviation up to a relative O(lambda) error
    assert np.abs(a - 2 * b).max() < 0.05 * np.abs(a).max()


# -- Hamiltonian condition

def test_kahler_moment_map_identity():
    """i_V omega = -d mu for the standard Kahler form and the rotation field."""
    V = rotation_field(C3)
    assert interior(V, standard_kahler_form(C3)) == -ext_d(Form.function(C3, MU))


def test_hamiltonian_condition_holds(df2):
    res = hamiltonian_check(df2, PTS)
    assert res.max() < 1e-9


def test_hamiltonian_condition_undeformed():
    df = deformed_frames(Deformation(C3, [0, 0, 0], [1, 1, 1]))
    assert hamiltonian_check(df, PTS, xi_mode="zero").max() < 1e-12


def test_hamiltonian_negative_controls(df2):
    assert hamiltonian_check(df2, PTS, mu=MU + z[0] * zb[1]).max() > 1e-3
    assert hamiltonian_check(df2, PTS, xi_mode="zero").max() > 1e-3


# -- holomorphy

def test_holomorphy_residuals_vanish(df2):
    res = holomorphy_check(df2, PTS, seed=1)
    worst = max(max(r.R_formula, r.R_definition, r.R_ambient, r.hrc, r.nonvertical) for rs in res for r in rs)
    assert worst < 1e-9


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_appendix_dmu_contractions_vanish_on_c3(df2, i, j):
    A, B = tau01_sections(df2)
    br = bracket_minus(A[i - 1], B[j - 1], df2)
    assert dmu_contraction(br, MU).is_zero()
    assert br == bracket_minus_closed_form(df2, i, j)


def test_appendix_display_for_second_pair(df2):
    A, B = tau01_sections(df2)
    assert bracket_minus(A[1], B[0], df2) == appendix_display(df2, 2)


def test_appendix_negative_control():
    d = Deformation(C3, [SOL_II.f[0], SOL_II.f[1] * z[1], SOL_II.f[2]], [1, 1, 1])
    df = deformed_frames(d, allow_nonintegrable=True)
    A, B = tau01_sections(df)
    assert not dmu_contraction(bracket_minus(A[0], B[0], df), MU).is_zero()


def test_appendix_sections_identified_with_tau(df2):
    res = appendix_identification(df2, PTS[1])
    assert max(res.values()) < 1e-9


# -- (1,1) condition

def test_type_11_residuals(df2):
    assert type_11_check(df2, PTS, seed=2).max() < 1e-9
    undeformed = deformed_frames(Deformation(C3, [0, 0, 0], [1, 1, 1]))
    assert type_11_check(undeformed, PTS[:2], seed=2).max() < 1e-12


def test_type_11_negative_control(df2):
    bad = type_11_check(df2, PTS, seed=2, xi_extra=non_hamiltonian_perturbation(C3, Scalar(mpq(1, 10))))
    assert bad.max() > 1e-4


# -- type-jumping locus

def test_undeformed_has_no_locus():
    assert not type_locus(Deformation(C3, [0, 0, 0], [1, 1, 1])).has_locus


def test_solution_ii_locus_is_three_lines():
    tl = type_locus(SOL_II)
    assert tl.ratio_displayed is not None and tl.ratio_triple is not None
    q = tl.rho.exact_div(three_lines(C3))
    assert q.is_const() and not q.is_zero()


def test_solution_i_locus():
    tl = type_locus(SOL["solution (i)"])
    assert tl.ratio_triple is not None
    assert tl.displayed is None
    # det[f; g; z] = -lambda z0^2 z1 by hand; the spinor gives 1/2 i times it
    assert tl.triple == (z[0] * z[0] * z[1]).scale(-TENTH)
    assert tl.rho == (z[0] * z[0] * z[1]).scale(Scalar(0, mpq(-1, 20)))
    assert tl.ratio_triple == type_locus(SOL_II).ratio_triple


def test_random_deformation_locus_is_displayed_cubic():
    rng = random.Random(9)
    for _ in range(3):
        tl = type_locus(_random_mc_deformation(C3, rng, TENTH))
        assert tl.ratio_displayed is not None
