"""Sparse multivariate polynomials over the Gaussian rationals.

Variables come in conjugate pairs: holomorphic ``z0..z{n-1}`` followed by the
formal conjugates ``zb0..zb{n-1}``.  Exponent vectors are packed into a single
integer whose high bits hold the total degree, so monomial multiplication is
integer addition and sorting keys gives graded-lexicographic order.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .scalar import Scalar, _ZERO, format_pair, pair_div, pair_mul, to_mpq

BITS = 8
MASK = (1 << BITS) - 1
MAX_DEGREE = MASK


class ContextError(ValueError):
    """Operands live in different variable contexts."""


class NotDivisible(ArithmeticError):
    pass


class Ring:
    """Variable context for ``n`` complex coordinates and their conjugates."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one complex coordinate")
        self.n = n
        self.nvars = 2 * n
        self.names = tuple([f"z{i}" for i in range(n)] + [f"zb{i}" for i in range(n)])
        self._index = {name: k for k, name in enumerate(self.names)}
        self._shift = tuple(BITS * (self.nvars - 1 - k) for k in range(self.nvars))
        self._deg_shift = BITS * self.nvars
        self._unit = tuple((1 << s) + (1 << self._deg_shift) for s in self._shift)

    def __eq__(self, other):
        return isinstance(other, Ring) and other.n == self.n

    def __hash__(self):
        return hash(("Ring", self.n))

    def __repr__(self):
        return f"Ring({self.n})"

    def index(self, var) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise KeyError(f"variable index {var} out of range")
            return var
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"unknown variable {var!r}") from None

    def conj_index(self, k: int) -> int:
        return k + self.n if k < self.n else k - self.n

    def encode(self, exps) -> int:
        key = sum(exps) << self._deg_shift
        for e, s in zip(exps, self._shift):
            key |= e << s
        return key

    def decode(self, key: int) -> tuple:
        return _decode(key, self._shift)

    def key_degree(self, key: int) -> int:
        return key >> self._deg_shift

    # constructors
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly.const(self, 1)

    def var(self, name) -> "Poly":
        k = self.index(name)
        return Poly(self, {self._unit[k]: (to_mpq(1), _ZERO)})

    def z(self, i: int) -> "Poly":
        return self.var(i)

    def zb(self, i: int) -> "Poly":
        return self.var(self.n + i)

    def gens(self):
        return [self.var(k) for k in range(self.nvars)]


@lru_cache(maxsize=200000)
def _decode(key: int, shifts: tuple) -> tuple:
    return tuple((key >> s) & MASK for s in shifts)


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v[0] != 0 or v[1] != 0}


class Poly:
    """Immutable polynomial; ``terms`` maps packed monomials to (re, im) pairs."""

    __slots__ = ("ring", "terms", "_arrays", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._arrays = None
        self._hash = None

    @classmethod
    def const(cls, ring: Ring, c) -> "Poly":
        s = Scalar.coerce(c)
        if s.is_zero():
            return cls(ring, {})
        return cls(ring, {0: s.as_pair()})

    @classmethod
    def from_terms(cls, ring: Ring, items) -> "Poly":
        """Build from an iterable of (exponent tuple, scalar)."""
        out: dict = {}
        for exps, c in items:
            if len(exps) != ring.nvars:
                raise ValueError("exponent vector has wrong length")
            key = ring.encode(exps)
            p = Scalar.coerce(c).as_pair()
            if key in out:
                q = out[key]
                out[key] = (q[0] + p[0], q[1] + p[1])
            else:
                out[key] = p
        return cls(ring, _clean(out))

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ContextError(f"variable context mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Scalar)) or _is_rational(other):
            return Poly.const(self.ring, other)
        return None

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> Scalar:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return Scalar.pair(self.terms.get(0, (_ZERO, _ZERO)))

    def coeff(self, exps) -> Scalar:
        return Scalar.pair(self.terms.get(self.ring.encode(exps), (_ZERO, _ZERO)))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return self.ring.key_degree(max(self.terms))

    def degree_in(self, var) -> int:
        k = self.ring.index(var)
        if not self.terms:
            return -1
        return max(self.ring.decode(key)[k] for key in self.terms)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {self.ring.key_degree(k) for k in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return deg is None or degs == {deg}

    def is_holomorphic(self) -> bool:
        n = self.ring.n
        return all(not any(self.ring.decode(k)[n:]) for k in self.terms)

    def leading(self):
        key = max(self.terms)
        return key, self.terms[key]

    def items(self):
        """(exponent tuple, Scalar) in graded-lex descending order."""
        for key in sorted(self.terms, reverse=True):
            yield self.ring.decode(key), Scalar.pair(self.terms[key])

    def __len__(self):
        return len(self.terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for k, v in o.terms.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                s = (w[0] + v[0], w[1] + v[1])
                if s[0] == 0 and s[1] == 0:
                    del out[k]
                else:
                    out[k] = s
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {k: (-v[0], -v[1]) for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "Poly":
        p = Scalar.coerce(c).as_pair()
        if p[0] == 0 and p[1] == 0:
            return Poly(self.ring, {})
        return Poly(self.ring, {k: pair_mul(v, p) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)) or _is_rational(other):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if not a or not b:
            return Poly(self.ring, {})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, vb), = b.items()
            return Poly(self.ring, {k + kb: pair_mul(v, vb) for k, v in a.items()})
        if self.ring.key_degree(max(a)) + self.ring.key_degree(max(b)) > MAX_DEGREE:
            raise OverflowError("polynomial degree exceeds packing limit")
        out: dict = {}
        get = out.get
        for kb, (c, d) in b.items():
            real_b = d == 0
            for ka, (x, y) in a.items():
                k = ka + kb
                if real_b:
                    if y == 0:
                        re, im = x * c, _ZERO
                    else:
                        re, im = x * c, y * c
                else:
                    re, im = x * c - y * d, x * d + y * c
                w = get(k)
                if w is None:
                    out[k] = (re, im)
                else:
                    out[k] = (w[0] + re, w[1] + im)
        return Poly(self.ring, _clean(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Scalar)) or _is_rational(other):
            return self.scale(Scalar.coerce(other).inverse())
        return NotImplemented

    def conj(self) -> "Poly":
        ring = self.ring
        n = ring.n
        out = {}
        for key, (re, im) in self.terms.items():
            e = ring.decode(key)
            out[ring.encode(e[n:] + e[:n])] = (re, -im)
        return Poly(ring, out)

    def partial(self, var) -> "Poly":
        ring = self.ring
        k = ring.index(var)
        shift = ring._shift[k]
        unit = ring._unit[k]
        out = {}
        for key, (re, im) in self.terms.items():
            e = (key >> shift) & MASK
            if e:
                out[key - unit] = (re * e, im * e)
        return Poly(ring, out)

    def subs_scale(self, factors) -> "Poly":
        """Substitute each variable v -> factors[v] * v (scalar factors)."""
        ring = self.ring
        fac = [Scalar.coerce(f) for f in factors]
        out = {}
        for key, v in self.terms.items():
            e = ring.decode(key)
            c = Scalar.pair(v)
            for k, p in enumerate(e):
                if p:
                    c = c * fac[k] ** p
            if not c.is_zero():
                out[key] = c.as_pair()
        return Poly(ring, out)

    def divide(self, other: "Poly"):
        """Multivariate division by the graded-lex leading term; returns (q, r)."""
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        ring = self.ring
        lk, lv = o.leading()
        le = ring.decode(lk)
        rem = dict(self.terms)
        quo: dict = {}
        res: dict = {}
        dterms = o.terms
        while rem:
            k = max(rem)
            v = rem[k]
            e = ring.decode(k)
            if all(a >= b for a, b in zip(e, le)):
                qk = k - lk
                qv = pair_div(v, lv)
                quo[qk] = qv
                for dk, dv in dterms.items():
                    kk = dk + qk
                    t = pair_mul(dv, qv)
                    w = rem.get(kk)
                    if w is None:
                        rem[kk] = (-t[0], -t[1])
                    else:
                        s = (w[0] - t[0], w[1] - t[1])
                        if s[0] == 0 and s[1] == 0:
                            del rem[kk]
                        else:
                            rem[kk] = s
            else:
                res[k] = v
                del rem[k]
        return Poly(ring, quo), Poly(ring, res)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divide(other)
        if not r.is_zero():
            raise NotDivisible("polynomial division is not exact")
        return q

    def content_normalized(self):
        """(unit, monic poly) with self = unit * monic and leading coefficient 1."""
        if not self.terms:
            return Scalar(1), self
        _, lv = self.leading()
        unit = Scalar.pair(lv)
        return unit, self.scale(unit.inverse())

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ContextError:
            return False
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.n, frozenset(self.terms.items())))
        return self._hash

    # -- numerics ---------------------------------------------------------
    def arrays(self):
        """(exponents int array [nterms, nvars], complex coefficient array)."""
        if self._arrays is None:
            keys = list(self.terms)
            exps = np.array([self.ring.decode(k) for k in keys], dtype=np.int64).reshape(len(keys), self.ring.nvars)
            coef = np.array([complex(float(v[0]), float(v[1])) for v in self.terms.values()], dtype=complex)
            self._arrays = (exps, coef)
        return self._arrays

    def eval_values(self, w) -> complex:
        """Evaluate at a full coordinate vector (z's then zb's)."""
        exps, coef = self.arrays()
        if not len(coef):
            return 0j
        w = np.asarray(w, dtype=complex)
        return complex(np.sum(coef * np.prod(w[None, :] ** exps, axis=1)))

    def eval_exact(self, values) -> Scalar:
        """Exact evaluation at Gaussian-rational coordinates (z's then zb's)."""
        vals = [Scalar.coerce(v) for v in values]
        total = Scalar(0)
        for e, c in self.items():
            t = c
            for v, p in zip(vals, e):
                if p:
                    t = t * v ** p
            total = total + t
        return total

    # -- text -------------------------------------------------------------
    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"Poly({self})"


def _is_rational(x) -> bool:
    from numbers import Rational

    return isinstance(x, Rational) and not isinstance(x, bool)


def monomial_str(ring: Ring, exps) -> str:
    parts = []
    for name, e in zip(ring.names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def poly_to_str(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for key in sorted(p.terms, reverse=True):
        re, im = p.terms[key]
        mono = monomial_str(p.ring, p.ring.decode(key))
        neg = (im == 0 and re < 0) or (re == 0 and im < 0)
        if neg:
            re, im = -re, -im
        coef = format_pair(re, im)
        if mono:
            body = mono if coef == "1" else f"{coef}*{mono}"
        else:
            body = coef
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
