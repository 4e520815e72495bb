"""Fractions of polynomials with equality decided by cross-multiplication."""
from __future__ import annotations

from .poly import ContextError, NotDivisible, Poly, Ring, _is_rational
from .scalar import Scalar


class RatFunc:
    """Immutable quotient num/den of two polynomials over one ring.

    The denominator is normalized to have leading coefficient 1.  No gcd is
    taken; the constructor only cancels the denominator when it divides the
    numerator exactly and is cheap to test (constant or monomial).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = num.ring.one()
        if num.ring != den.ring:
            raise ContextError("numerator and denominator live in different rings")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero() or num == den:
            num = num.ring.one() if not num.is_zero() else num
            den = num.ring.one()
        elif den.is_const():
            c = den.const_value()
            if c != 1:
                num = num.scale(c.inverse())
            den = num.ring.one()
        else:
            unit, den = den.content_normalized()
            if unit != 1:
                num = num.scale(unit.inverse())
            if len(den) == 1:
                q, r = num.divide(den)
                if r.is_zero():
                    num, den = q, num.ring.one()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @property
    def ring(self) -> Ring:
        return self.num.ring

    @classmethod
    def coerce(cls, x, ring: Ring) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.ring != ring:
                raise ContextError(f"variable context mismatch: {x.ring} vs {ring}")
            return x
        if isinstance(x, Poly):
            if x.ring != ring:
                raise ContextError(f"variable context mismatch: {x.ring} vs {ring}")
            return cls(x)
        if isinstance(x, (int, Scalar)) or _is_rational(x):
            return cls(Poly.const(ring, x))
        raise TypeError(f"cannot use {type(x).__name__} as a rational function")

    def _co(self, other):
        try:
            return RatFunc.coerce(other, self.ring)
        except TypeError:
            return None

    def is_poly(self) -> bool:
        return self.den.is_const()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Scalar:
        return self.num.const_value() / self.den.const_value()

    def as_poly(self) -> Poly:
        if self.den.is_const():
            return self.num.scale(self.den.const_value().inverse())
        q, r = self.num.divide(self.den)
        if not r.is_zero():
            raise NotDivisible("rational function is not a polynomial")
        return q

    def simplify(self) -> "RatFunc":
        """Cancel the denominator when it divides the numerator exactly."""
        if self.den.is_const():
            return self
        q, r = self.num.divide(self.den)
        return RatFunc(q) if r.is_zero() else self

    # arithmetic
    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.den.is_const():
            return RatFunc(self.num + o.num * self.den, self.den)
        if self.den.is_const():
            return RatFunc(self.num * o.den + o.num, o.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(self.ring.zero())
        if self.den.is_const() and o.den.is_const():
            return RatFunc(self.num * o.num)
        if self.den == o.num:
            return RatFunc(self.num, o.den)
        if o.den == self.num:
            return RatFunc(o.num, self.den)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def conj(self) -> "RatFunc":
        return RatFunc(self.num.conj(), self.den.conj())

    def partial(self, var) -> "RatFunc":
        dn = self.num.partial(var)
        if self.den.is_const():
            return RatFunc(dn, self.den)
        dd = self.den.partial(var)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def __eq__(self, other):
        try:
            o = self._co(other)
        except ContextError:
            return False
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None

    def eval_values(self, w) -> complex:
        return self.num.eval_values(w) / self.den.eval_values(w)

    def __str__(self):
        if self.den.is_const():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def eval_exact(a: RatFunc, values) -> Scalar:
    """Exact value at Gaussian-rational coordinates (z's then zb's)."""
    d = a.den.eval_exact(values)
    if d.is_zero():
        raise ZeroDivisionError("denominator vanishes at the evaluation point")
    return a.num.eval_exact(values) / d
