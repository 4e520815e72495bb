import pytest
from gmpy2 import mpq
from hypothesis import given

from gkred.algebra import I, Scalar
from gkred.calculus import (
    Chart, Form, SeriesDiverges, clifford, exp_bivector_action, ext_d, interior, lie_bracket,
    lie_derivative, wedge,
)
from gkred.courant import GSection, pairing
from gkred.gk import (
    Deformation, deformed_frames, deformed_spinor, holomorphic_volume, rotation_field, sphere_moment_map,
    standard_kahler_form, standard_sections,
)

from conftest import forms, sections, vector_fields

C2 = Chart(2)
C3 = Chart(3)
z = [C3.z(k) for k in range(3)]
F_SOL = [(z[1] - z[0]) * (z[2] - z[0]), (z[0] - z[1]) * (z[2] - z[1]), (z[0] - z[2]) * (z[1] - z[2])]


# -- properties

@given(vector_fields(C2), vector_fields(C2), vector_fields(C2))
def test_jacobi_identity(X, Y, Z):
    jac = (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X))
           + lie_bracket(Z, lie_bracket(X, Y)))
    assert jac.is_zero()


@given(vector_fields(C2, max_deg=2), forms(C2))
def test_cartan_formula(X, w):
    assert lie_derivative(X, w) == ext_d(interior(X, w)) + interior(X, ext_d(w))


@given(vector_fields(C2), vector_fields(C2), forms(C2))
def test_lie_derivative_commutator(X, Y, w):
    lhs = lie_derivative(X, lie_derivative(Y, w)) - lie_derivative(Y, lie_derivative(X, w))
    assert lhs == lie_derivative(lie_bracket(X, Y), w)


@given(forms(C2, max_deg=3))
def test_d_squared_is_zero(w):
    assert ext_d(ext_d(w)).is_zero()


@given(vector_fields(C2), forms(C2, max_deg=3))
def test_interior_squared_is_zero(X, w):
    assert interior(X, interior(X, w)).is_zero()


@given(forms(C2, max_deg=1), forms(C2, max_deg=2))
def test_d_is_graded_leibniz_on_one_forms(a, b):
    a1 = a.part(1)
    assert ext_d(wedge(a1, b)) == wedge(ext_d(a1), b) - wedge(a1, ext_d(b))


@given(sections(C2, max_deg=2), forms(C2, max_deg=2))
def test_clifford_relation(s, phi):
    """s.s.phi = <s,s> phi with the half pairing; the plain pairing gives 2 s.s."""
    lhs = clifford(s, clifford(s, phi))
    assert lhs == phi * pairing(s, s, "half")
    assert lhs * 2 == phi * pairing(s, s)


# -- examples

def test_bracket_examples():
    assert lie_bracket(C3.pz(0), C3.pz(1) * z[0]) == C3.pz(1)
    V = rotation_field(C3)
    assert lie_bracket(V, V).is_zero()


def test_rotation_acts_on_degree_two_field_by_weight_minus_one():
    """[V, f0 sum_p d/dz_p] for homogeneous quadratic f0: V scales f0 by 2i and d/dz by -i."""
    V = rotation_field(C3)
    W = (C3.pz(0) + C3.pz(1) + C3.pz(2)) * F_SOL[0]
    expected = W * Scalar(0, 1)
    assert lie_bracket(V, W) == expected


def test_exterior_derivative_examples():
    assert ext_d(C3.dz(1) * z[0]) == wedge(C3.dz(0), C3.dz(1))
    mu = sphere_moment_map(C3)
    assert ext_d(ext_d(Form.function(C3, mu))).is_zero()
    omega = standard_kahler_form(C3)
    assert ext_d(interior(rotation_field(C3), omega)).is_zero()


def test_interior_examples():
    assert interior(C3.pz(0), wedge(C3.dz(0), C3.dz(1))) == C3.dz(1)
    kahler_i = Form.zero(C3)
    for j in range(3):
        kahler_i = kahler_i + wedge(C3.dz(j), C3.dzb(j)) * I
    dmu = ext_d(Form.function(C3, sphere_moment_map(C3)))
    assert interior(rotation_field(C3), kahler_i) == -dmu
    X = C3.pz(0) * z[1] + C3.pzb(2)
    assert interior(X, interior(X, kahler_i)).is_zero()


def test_lie_derivative_examples():
    assert lie_derivative(C3.pz(0), C3.dz(1) * z[0]) == C3.dz(1)
    V = rotation_field(C3)
    assert lie_derivative(V, Form.function(C3, sphere_moment_map(C3))).is_zero()
    assert lie_derivative(V, standard_kahler_form(C3)).is_zero()


def test_clifford_examples():
    E, F, Eb, Fb = standard_sections(C3)
    phi1 = holomorphic_volume(C3)
    out = clifford(E[0], phi1)
    expected = wedge(C3.dz(1), C3.dz(2)) + wedge(wedge(wedge(C3.dzb(0), C3.dz(0)), C3.dz(1)), C3.dz(2))
    assert out == expected
    assert clifford(F[0], Form.function(C3, 1)) == -C3.dzb(0)


def test_deformed_frames_annihilate_deformed_spinor():
    d = Deformation(C3, F_SOL, [1, 1, 1], Scalar(mpq(1, 10)))
    df = deformed_frames(d)
    phi = deformed_spinor(d)
    for s in df.Lp:
        assert clifford(s, phi).is_zero()


def test_exp_bivector_examples():
    E, F, _, _ = standard_sections(C3)
    phi1 = holomorphic_volume(C3)
    assert exp_bivector_action([], phi1) == phi1
    assert exp_bivector_action([(Scalar(0), E[0], F[0])], phi1) == phi1


def test_exp_bivector_degree_zero_part_is_linear_in_lambda_at_first_order():
    V = rotation_field(C3)
    vals = {}
    for lam in (mpq(1, 10), mpq(1, 20)):
        phi = deformed_spinor(Deformation(C3, F_SOL, [1, 1, 1], Scalar(lam)))
        vals[lam] = interior(V, phi).part(0).scalar()
    # the contraction of the degree-1 part is exactly linear in lambda
    assert vals[mpq(1, 10)] == vals[mpq(1, 20)] * 2
    assert not vals[mpq(1, 10)].is_zero()


def test_exp_bivector_reports_nontermination():
    ch = Chart(1)
    s = GSection(ch.pz(0) * ch.z(0), ch.dz(0) * ch.z(0))
    with pytest.raises(SeriesDiverges):
        exp_bivector_action([(Scalar(1), s, GSection(ch.pz(0), ch.dzb(0)))], Form.function(ch, 1 + ch.z(0)))
