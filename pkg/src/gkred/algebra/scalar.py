"""Gaussian rationals a + b*i with exact arithmetic."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def to_mpq(x) -> mpq:
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fmt_q(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Immutable Gaussian rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_mpq(re))
        object.__setattr__(self, "im", to_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact scalars")
        return cls(x, 0)

    @classmethod
    def pair(cls, p) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", p[0])
        object.__setattr__(s, "im", p[1])
        return s

    def as_pair(self):
        return (self.re, self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def conj(self) -> "Scalar":
        return Scalar.pair((self.re, -self.im))

    def __add__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar.pair((self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __neg__(self):
        return Scalar.pair((-self.re, -self.im))

    def __sub__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar.pair((self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return Scalar.pair((a * c - b * d, a * d + b * c))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar.pair((self.re / n, -self.im / n))

    def __truediv__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return format_pair(self.re, self.im)


I = Scalar(0, 1)


def format_pair(re: mpq, im: mpq) -> str:
    if im == 0:
        return fmt_q(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return _imag(im)
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else _imag(mag)
    return f"({fmt_q(re)}{sign}{imag})"


def _imag(q: mpq) -> str:
    """Imaginary part text that parses back unambiguously (1/2*i, not 1/2i)."""
    return f"{fmt_q(q)}i" if q.denominator == 1 else f"{fmt_q(q)}*i"


def pair_mul(p, q):
    a, b = p
    c, d = q
    if b == 0 and d == 0:
        return (a * c, _ZERO)
    return (a * c - b * d, a * d + b * c)


def pair_div(p, q):
    c, d = q
    n = c * c + d * d
    if n == 0:
        raise ZeroDivisionError("division by zero scalar")
    return pair_mul(p, (c / n, -d / n))
