import pytest
from hypothesis import given, settings

from gkred.algebra import Scalar
from gkred.calculus import Chart, Form, ext_d, interior, wedge
from gkred.courant import (
    FrameBundle, GSection, NotInSpan, TwistH, b_transform, courant_bracket, expand_in_frame, pairing,
    project_onto, project_orthogonal, recombine,
)
from gkred.gk import (
    Deformation, appendix_display, bracket_minus_closed_form, deformed_frames, frame_bracket_formula,
    minus_part, rotation_field, standard_sections, tau01_sections,
)

from conftest import forms, sections

C2 = Chart(2)
C3 = Chart(3)
z = [C3.z(k) for k in range(3)]
F_SOL = [(z[1] - z[0]) * (z[2] - z[0]), (z[0] - z[1]) * (z[2] - z[1]), (z[0] - z[2]) * (z[1] - z[2])]
E, F, Eb, Fb = standard_sections(C3)


def closed_three_forms(chart):
    return forms(chart, max_deg=2).map(lambda B: ext_d(B.part(2)))


def two_forms(chart):
    return forms(chart, max_deg=2).map(lambda B: B.part(2))


def _deformed():
    return deformed_frames(Deformation(C3, F_SOL, [1, 1, 1]))


# -- pairing

def test_pairing_on_standard_frame():
    for i in range(3):
        for j in range(3):
            assert pairing(E[i], Eb[j]) == (2 if i == j else 0)
            assert pairing(E[i], F[j]).is_zero()
            assert pairing(E[i], E[j]).is_zero()
            assert pairing(F[i], Fb[j]) == (-2 if i == j else 0)


def test_half_convention_switch():
    assert pairing(E[0], Eb[0], "half") == 1
    with pytest.raises(ValueError):
        pairing(E[0], Eb[0], "quarter")


def test_pairing_with_itself_is_twice_the_contraction():
    V = rotation_field(C3)
    xi = C3.dz(0) * z[1]
    s = GSection(V, xi)
    assert pairing(s, s) == interior(V, xi).scalar() * 2
    assert pairing(GSection.of_vector(V), GSection.of_vector(V)).is_zero()


@given(sections(C2), sections(C2))
def test_pairing_is_symmetric(a, b):
    assert pairing(a, b) == pairing(b, a)


# -- bracket

def test_bracket_of_constant_sections_vanishes():
    assert courant_bracket(E[0], Fb[1]).is_zero()
    assert courant_bracket(E[0] + F[2], Eb[1], TwistH.zero(C3)).is_zero()


@settings(max_examples=200)
@given(sections(C2, max_deg=2), sections(C2, max_deg=2), closed_three_forms(C2))
def test_anchor_of_pairing_matches_bracket(a, b, H):
    """pi(a)<b,b> = 2<[a,b]_H, b>."""
    lhs = a.vec.apply(pairing(b, b))
    rhs = pairing(courant_bracket(a, b, TwistH(H)), b) * 2
    assert lhs == rhs


@given(sections(C2), sections(C2), closed_three_forms(C2))
def test_bracket_is_skew_up_to_exact_term(a, b, H):
    h = TwistH(H)
    s = courant_bracket(a, b, h) + courant_bracket(b, a, h)
    assert s.vec.is_zero()
    assert s.form == ext_d(Form.function(C2, pairing(a, b)))


def test_twist_rejects_non_closed_forms():
    x0 = C2.z(0)
    with pytest.raises(ValueError):
        TwistH(wedge(wedge(C2.dz(1), C2.dzb(0)), C2.dzb(1)) * x0)
    with pytest.raises(ValueError):
        TwistH(C2.dz(0))


def test_frame_bracket_from_the_appendix():
    df = _deformed()
    for i in range(3):
        for j in range(3):
            assert courant_bracket(df.Lp[i], df.Lm[j]) == frame_bracket_formula(df, i)


def test_appendix_projected_brackets():
    df = _deformed()
    A, B = tau01_sections(df)
    for i in (1, 2):
        bm = minus_part(courant_bracket(A[i - 1], B[0]), df)
        assert bm == appendix_display(df, i)
        assert bm == bracket_minus_closed_form(df, i, 1)
    for i in (1, 2):
        assert minus_part(courant_bracket(A[i - 1], B[1]), df) == bracket_minus_closed_form(df, i, 2)


# -- B-transforms

@given(sections(C2))
def test_zero_b_field_is_identity(a):
    assert b_transform(Form.zero(C2), a) == a


@given(two_forms(C2), sections(C2), sections(C2))
def test_b_transform_preserves_pairing(B, a, b):
    assert pairing(b_transform(B, a), b_transform(B, b)) == pairing(a, b)


@settings(max_examples=200)
@given(two_forms(C2), sections(C2, max_deg=2), sections(C2, max_deg=2), closed_three_forms(C2))
def test_b_transform_twists_bracket(B, a, b, H):
    lhs = courant_bracket(b_transform(B, a), b_transform(B, b), TwistH(H))
    rhs = b_transform(B, courant_bracket(a, b, TwistH(H + ext_d(B))))
    assert lhs == rhs


@given(forms(C2, max_deg=1), sections(C2), sections(C2), closed_three_forms(C2))
def test_closed_b_field_preserves_bracket(A, a, b, H):
    B = ext_d(A.part(1))
    h = TwistH(H)
    assert courant_bracket(b_transform(B, a), b_transform(B, b), h) == b_transform(B, courant_bracket(a, b, h))


def test_b_transform_rejects_non_two_forms():
    with pytest.raises(ValueError):
        b_transform(C3.dz(0), E[0])


# -- frames

STANDARD = FrameBundle(E + F + Eb + Fb, "standard")


def test_expand_unit_vector():
    c = expand_in_frame(E[0], STANDARD)
    assert c[0] == 1
    assert all(x.is_zero() for x in c[1:])


@given(sections(C2))
def test_expand_then_recombine_is_identity(s):
    E2, F2, Eb2, Fb2 = standard_sections(C2)
    frame = FrameBundle(E2 + F2 + Eb2 + Fb2, "standard")
    assert recombine(expand_in_frame(s, frame), frame) == s


def test_expand_of_bracket_reproduces_appendix_coefficients():
    df = _deformed()
    A, B = tau01_sections(df)
    br = courant_bracket(A[0], B[0])
    frame = FrameBundle(df.Lm + df.Lm_bar + df.Lp + df.Lp_bar, "V- + V+")
    c = expand_in_frame(br, frame)
    generic = recombine(c[:6], FrameBundle(df.Lm + df.Lm_bar))
    assert generic == appendix_display(df, 1)
    assert generic == minus_part(br, df)


def test_not_in_span_is_reported():
    frame = FrameBundle(E[:1] + F[:1], "partial")
    with pytest.raises(NotInSpan):
        expand_in_frame(E[1], frame)


def test_projections_on_flat_structure():
    Vp = FrameBundle(E + Eb, "V+")
    Vm = FrameBundle(F + Fb, "V-")
    assert project_onto(E[0], Vp, Vm) == E[0]
    assert project_onto(GSection.zero(C3), Vp, Vm).is_zero()
    s = E[1] * z[0] + Fb[2]
    assert project_onto(s, Vp, Vm) == E[1] * z[0]
    assert project_orthogonal(s, Vp) == E[1] * z[0]


def test_isotropy_flag_is_verified():
    FrameBundle(E, "L", isotropic=True)
    with pytest.raises(ValueError):
        FrameBundle(E + Eb, "V+", isotropic=True)


def test_rank_certificate():
    assert STANDARD.certify_rank() == 12
    assert FrameBundle(E + [E[0] * Scalar(2)]).certify_rank() == 3
