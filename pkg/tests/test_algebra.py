import random

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from gkred.algebra import (
    ContextError, I, NearPole, NotDivisible, NumericPoint, ParseError, RatFunc, Ring, Scalar, SingularMatrix,
    det, evaluate, inverse, parse_poly, parse_ratfunc, ratfunc_solve,
)
from gkred.algebra.linalg import matvec

from conftest import RING2, polys, ratfuncs, scalars

R3 = Ring(3)
z0, z1, z2, zb0, zb1, zb2 = R3.gens()
F0 = (z1 - z0) * (z2 - z0)
F1 = (z0 - z1) * (z2 - z1)
F2 = (z0 - z2) * (z1 - z2)


def random_rational_point(rng, n=3):
    z = [Scalar(mpq(rng.randint(-9, 9), rng.randint(1, 5)), mpq(rng.randint(-9, 9), rng.randint(1, 5)))
         for _ in range(n)]
    return z + [c.conj() for c in z]


# -- Scalar

@given(scalars(), scalars(), scalars())
def test_scalar_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Scalar(0)
    if not a.is_zero():
        assert a * a.inverse() == Scalar(1)


@given(scalars(), scalars())
def test_scalar_conjugation_is_involutive_morphism(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


def test_scalar_is_exact():
    third = Scalar(1) / 3
    assert third + third + third == Scalar(1)
    assert I * I == Scalar(-1)
    with pytest.raises(TypeError):
        Scalar.coerce(0.5j)


# -- Poly

@given(polys(), polys(), polys())
def test_poly_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == RING2.zero()
    assert a * RING2.one() == a


@given(polys(), polys())
def test_poly_conjugation_is_involutive_morphism(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@given(polys(), polys(), st.integers(0, 3), st.integers(0, 3))
def test_partial_leibniz_and_commuting(a, b, u, v):
    assert (a * b).partial(u) == a.partial(u) * b + a * b.partial(u)
    assert a.partial(u).partial(v) == a.partial(v).partial(u)


@given(polys())
def test_canonical_form_has_no_zero_terms(a):
    assert all(not c.is_zero() for _, c in a.items())
    keys = list(a.terms)
    assert sorted(keys, reverse=True) == sorted(keys, reverse=True)


def test_binomial_square():
    p = z0 + zb0
    assert p * p == z0 ** 2 + z0 * zb0 * 2 + zb0 ** 2


def test_identity_product():
    assert F0 * 1 == F0


def test_expanded_f0_agrees_at_random_rational_points():
    expanded = z1 * z2 - z0 * z1 - z0 * z2 + z0 ** 2
    assert F0 == expanded
    rng = random.Random(5)
    for _ in range(5):
        pt = random_rational_point(rng)
        assert F0.eval_exact(pt) == expanded.eval_exact(pt)


def test_conjugate_examples():
    assert (z0 * I).conj() == zb0 * Scalar(0, -1)
    mu = z0 * zb0 + z1 * zb1 + z2 * zb2 - 1
    assert mu.conj() == mu


def test_partial_examples():
    assert (z0 ** 2).partial("z0") == z0 * 2
    for f in (F0, F1, F2):
        assert sum((f.partial(p) for p in range(3)), R3.zero()).is_zero()
        euler = sum((R3.z(q) * f.partial(q) for q in range(3)), R3.zero())
        assert euler - f * 2 == R3.zero()


def test_partial_unknown_variable():
    with pytest.raises((KeyError, ValueError)):
        z0.partial("w7")


def test_context_mismatch():
    with pytest.raises(ContextError):
        z0 + RING2.z(0)


def test_homogeneity_and_degree():
    assert F0.is_homogeneous(2)
    assert not (F0 + z0).is_homogeneous()
    assert F0.degree() == 2
    assert F0.is_holomorphic() and not zb0.is_holomorphic()


def test_exact_division():
    lines = (z0 - z1) * (z1 - z2) * (z2 - z0)
    assert (lines * (z0 + 3)).exact_div(z0 - z1) == (z1 - z2) * (z2 - z0) * (z0 + 3)
    with pytest.raises(NotDivisible):
        (z0 * z0 + 1).exact_div(z1)


# -- RatFunc

@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == RatFunc(RING2.one())
        assert (b / a) * a == b


@given(ratfuncs(), ratfuncs())
def test_ratfunc_equality_by_cross_multiplication(a, b):
    assert (a == b) == (a.num * b.den - b.num * a.den).is_zero()


@given(ratfuncs(), ratfuncs(), st.integers(0, 3))
def test_ratfunc_derivative_quotient_rule(a, b, v):
    assert (a * b).partial(v) == a.partial(v) * b + a * b.partial(v)


def test_ratfunc_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RatFunc(z0, R3.zero())


# -- linear algebra

def test_solve_identity():
    b = [RatFunc(z0), RatFunc(zb1 + 2), RatFunc(z2 * z1)]
    Id = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert ratfunc_solve(Id, b, R3) == b


def test_solve_one_by_one():
    K = z0 * zb0 + z1 * zb1 + 1
    rhs = z0 * 3 + zb2
    (x,) = ratfunc_solve([[K]], [rhs], R3)
    assert x == RatFunc(rhs, K)


def test_solve_two_by_two_back_substitution():
    A = [[z0 + 1, z1 * zb0], [zb1, z0 * z0 - 2]]
    b = [z2, RatFunc(R3.one(), z0 + 3)]
    x = ratfunc_solve(A, b, R3)
    res = [r - RatFunc.coerce(bb, R3) for r, bb in zip(matvec([[RatFunc.coerce(a, R3) for a in row] for row in A], x), b)]
    assert all(r.is_zero() for r in res)
    rng = random.Random(2)
    for _ in range(5):
        pt = random_rational_point(rng)
        xv = [r.num.eval_exact(pt) / r.den.eval_exact(pt) for r in x]
        Av = [[RatFunc.coerce(a, R3).num.eval_exact(pt) for a in row] for row in A]
        bv = [RatFunc.coerce(v, R3) for v in b]
        bv = [v.num.eval_exact(pt) / v.den.eval_exact(pt) for v in bv]
        for i in range(2):
            assert Av[i][0] * xv[0] + Av[i][1] * xv[1] == bv[i]


@given(st.lists(st.lists(polys(max_terms=2, max_exp=1), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(polys(max_terms=2, max_exp=1), min_size=3, max_size=3))
def test_solve_back_substitutes_exactly(A, b):
    if det(A, RING2).is_zero():
        with pytest.raises(SingularMatrix):
            ratfunc_solve(A, b, RING2)
        return
    x = ratfunc_solve(A, b, RING2)
    Ar = [[RatFunc.coerce(a, RING2) for a in row] for row in A]
    for row, bi in zip(matvec(Ar, x), b):
        assert (row - bi).is_zero()


def test_singular_matrix_reported():
    with pytest.raises(SingularMatrix):
        ratfunc_solve([[z0, z1], [z0 * 2, z1 * 2]], [1, 0], R3)


def test_inverse_and_det():
    A = [[z0, 1], [zb0, 2]]
    Ainv = inverse(A, R3)
    assert det(A, R3) == RatFunc(z0 * 2 - zb0)
    prod = [[sum((RatFunc.coerce(A[i][k], R3) * Ainv[k][j] for k in range(2)), RatFunc(R3.zero()))
             for j in range(2)] for i in range(2)]
    assert prod[0][0] == RatFunc(R3.one()) and prod[0][1].is_zero() and prod[1][1] == RatFunc(R3.one())


# -- numeric evaluation

def test_eval_examples():
    mu = z0 * zb0 + z1 * zb1 + z2 * zb2 - 1
    assert evaluate(mu, NumericPoint((1, 0, 0))) == 0
    assert evaluate(F0, NumericPoint((1, 1, 1))) == 0


@given(polys(), polys())
def test_eval_is_homomorphism(a, b):
    p = NumericPoint.random_on_sphere(np.random.default_rng(7), 2)
    assert abs(evaluate(a * b, p) - evaluate(a, p) * evaluate(b, p)) < 1e-9
    assert abs(evaluate(a + b, p) - evaluate(a, p) - evaluate(b, p)) < 1e-9


@given(polys())
def test_eval_conjugate_consistency(a):
    p = NumericPoint.random_on_sphere(np.random.default_rng(3), 2)
    assert abs(evaluate(a.conj(), p) - np.conj(evaluate(a, p))) < 1e-9


def test_near_pole():
    with pytest.raises(NearPole):
        evaluate(RatFunc(R3.one(), z0 - 1), NumericPoint((1, 0, 0)))


# -- canonical text

@given(polys())
def test_text_round_trip(a):
    assert parse_poly(str(a), RING2) == a


def test_text_form_examples():
    assert str(z0 * I - zb1 * Scalar(mpq(1, 2))) in ("i*z0 - 1/2*zb1", "-1/2*zb1 + i*z0")
    assert parse_ratfunc("(z0 + 1)/(zb0 - 2)", R3) == RatFunc(z0 + 1, zb0 - 2)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_poly("z0 + * z1", R3)
    assert exc.value.pos == 5
