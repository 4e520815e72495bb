"""Exterior calculus on a single complex coordinate patch.

Coordinates are w = (z_0..z_{n-1}, zb_0..zb_{n-1}) with the coordinate frame
d/dw_k and coframe dw_k.  Coefficients are RatFunc values in the variables w.
Forms use the determinant convention (a^b)(X, Y) = a(X) b(Y) - a(Y) b(X),
so that (i_X w)(Y, ...) = w(X, Y, ...).
"""
from __future__ import annotations

from .algebra import Poly, RatFunc, Ring, Scalar
from .algebra.poly import ContextError


class Chart:
    """Global chart on C^n with holomorphic and antiholomorphic coordinates."""

    def __init__(self, n: int):
        self.n = n
        self.dim = 2 * n
        self.ring = Ring(n)
        self.vec_names = tuple([f"pz{i}" for i in range(n)] + [f"pzb{i}" for i in range(n)])
        self.form_names = tuple([f"dz{i}" for i in range(n)] + [f"dzb{i}" for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, Chart) and other.n == self.n

    def __hash__(self):
        return hash(("Chart", self.n))

    def __repr__(self):
        return f"Chart({self.n})"

    def conj_index(self, k: int) -> int:
        return self.ring.conj_index(k)

    def rf(self, x) -> RatFunc:
        return RatFunc.coerce(x, self.ring)

    def coord(self, k: int) -> Poly:
        return self.ring.var(k)

    def z(self, i: int) -> Poly:
        return self.ring.z(i)

    def zb(self, i: int) -> Poly:
        return self.ring.zb(i)

    def zero_rf(self) -> RatFunc:
        return RatFunc(self.ring.zero())

    def basis_vector(self, k: int) -> "VectorField":
        comps = [self.zero_rf()] * self.dim
        comps[k] = RatFunc(self.ring.one())
        return VectorField(self, comps)

    def pz(self, i: int) -> "VectorField":
        return self.basis_vector(i)

    def pzb(self, i: int) -> "VectorField":
        return self.basis_vector(self.n + i)

    def basis_form(self, k: int) -> "Form":
        return Form(self, {(k,): RatFunc(self.ring.one())})

    def dz(self, i: int) -> "Form":
        return self.basis_form(i)

    def dzb(self, i: int) -> "Form":
        return self.basis_form(self.n + i)

    def function(self, f) -> "Form":
        return Form.function(self, f)

    def zero_vector(self) -> "VectorField":
        return VectorField(self, [self.zero_rf()] * self.dim)


def _check(a, b):
    if a.chart != b.chart:
        raise ContextError(f"chart mismatch: {a.chart} vs {b.chart}")


def _coerce_coef(chart: Chart, c):
    if isinstance(c, (RatFunc, Poly, Scalar, int)):
        return chart.rf(c)
    from numbers import Rational

    if isinstance(c, Rational):
        return chart.rf(c)
    return None


def derivative(chart: Chart, f, k: int) -> RatFunc:
    return chart.rf(f).partial(k)


class VectorField:
    """Vector field with RatFunc components on the coordinate frame."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps):
        if len(comps) != chart.dim:
            raise ValueError("wrong number of vector components")
        self.chart = chart
        self.comps = tuple(chart.rf(c) for c in comps)

    @classmethod
    def from_dict(cls, chart: Chart, d: dict) -> "VectorField":
        comps = [chart.zero_rf()] * chart.dim
        for k, c in d.items():
            comps[k] = chart.rf(c)
        return cls(chart, comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.comps])

    def __mul__(self, c):
        f = _coerce_coef(self.chart, c)
        if f is None:
            return NotImplemented
        return VectorField(self.chart, [f * a for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and all(a == b for a, b in zip(self.comps, other.comps))

    __hash__ = None

    def apply(self, f) -> RatFunc:
        """Directional derivative X(f)."""
        f = self.chart.rf(f)
        out = self.chart.zero_rf()
        for k, c in enumerate(self.comps):
            if not c.is_zero():
                out = out + c * f.partial(k)
        return out

    def conj(self) -> "VectorField":
        ch = self.chart
        comps = [None] * ch.dim
        for k, c in enumerate(self.comps):
            comps[ch.conj_index(k)] = c.conj()
        return VectorField(ch, comps)

    def __str__(self):
        return _combo_str([(c, name) for c, name in zip(self.comps, self.chart.vec_names)])

    def __repr__(self):
        return f"VectorField({self})"


def _sort_sign(idx):
    """Sort an index tuple; return (sign, sorted) or (0, None) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


class Form:
    """Inhomogeneous differential form: map from increasing index tuples to RatFunc.

    Also used as the spinor module (Clifford action in ``clifford``).
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: dict):
        self.chart = chart
        self.terms = {k: chart.rf(v) for k, v in terms.items() if not chart.rf(v).is_zero()}

    @classmethod
    def _raw(cls, chart, terms):
        obj = object.__new__(cls)
        obj.chart = chart
        obj.terms = {k: v for k, v in terms.items() if not v.is_zero()}
        return obj

    @classmethod
    def function(cls, chart: Chart, f) -> "Form":
        return cls(chart, {(): chart.rf(f)})

    @classmethod
    def zero(cls, chart: Chart) -> "Form":
        return cls._raw(chart, {})

    @classmethod
    def from_components(cls, chart: Chart, comps, degree: int = 1) -> "Form":
        """1-form sum_k comps[k] dw_k (degree 1 only)."""
        if degree != 1:
            raise ValueError("from_components builds 1-forms")
        return cls(chart, {(k,): c for k, c in enumerate(comps)})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(k) for k in self.terms}

    def part(self, deg: int) -> "Form":
        return Form._raw(self.chart, {k: v for k, v in self.terms.items() if len(k) == deg})

    def coeff(self, idx) -> RatFunc:
        sign, key = _sort_sign(idx)
        if sign == 0:
            return self.chart.zero_rf()
        v = self.terms.get(key)
        if v is None:
            return self.chart.zero_rf()
        return v if sign > 0 else -v

    def components(self):
        """Components of a 1-form as a list indexed by coordinate."""
        if self.degrees() - {1}:
            raise ValueError("components() needs a 1-form")
        return [self.terms.get((k,), self.chart.zero_rf()) for k in range(self.chart.dim)]

    def scalar(self) -> RatFunc:
        return self.terms.get((), self.chart.zero_rf())

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        _check(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Form._raw(self.chart, out)

    def __neg__(self):
        return Form._raw(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        f = _coerce_coef(self.chart, c)
        if f is None:
            return NotImplemented
        return Form._raw(self.chart, {k: f * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.chart != other.chart:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def wedge(self, other: "Form") -> "Form":
        _check(self, other)
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                sign, key = _sort_sign(ka + kb)
                if sign == 0:
                    continue
                t = va * vb if sign > 0 else -(va * vb)
                out[key] = out[key] + t if key in out else t
        return Form._raw(self.chart, out)

    def __xor__(self, other):
        return self.wedge(other)

    def conj(self) -> "Form":
        ch = self.chart
        out: dict = {}
        for k, v in self.terms.items():
            sign, key = _sort_sign(tuple(ch.conj_index(i) for i in k))
            t = v.conj() if sign > 0 else -v.conj()
            out[key] = out[key] + t if key in out else t
        return Form._raw(ch, out)

    def evaluate(self, *vectors) -> RatFunc:
        """w(X_1, ..., X_k) for a homogeneous k-form."""
        w = self
        for X in vectors:
            w = interior(X, w)
        return w.scalar()

    def __str__(self):
        names = self.chart.form_names
        items = []
        for k in sorted(self.terms, key=lambda t: (len(t), t)):
            label = "^".join(names[i] for i in k)
            items.append((self.terms[k], label))
        return _combo_str(items)

    def __repr__(self):
        return f"Form({self})"


Spinor = Form


def _combo_str(items) -> str:
    parts = []
    for c, label in items:
        if c.is_zero():
            continue
        if label == "":
            parts.append(f"({c})")
        elif c == 1:
            parts.append(label)
        else:
            parts.append(f"({c})*{label}")
    return " + ".join(parts) if parts else "0"


# -- operations ----------------------------------------------------------

def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^k = X(Y^k) - Y(X^k)."""
    _check(X, Y)
    return VectorField(X.chart, [X.apply(b) - Y.apply(a) for a, b in zip(X.comps, Y.comps)])


def ext_d(w: Form) -> Form:
    ch = w.chart
    out: dict = {}
    for key, c in w.terms.items():
        for k in range(ch.dim):
            if k in key:
                continue
            dc = c.partial(k)
            if dc.is_zero():
                continue
            sign, nk = _sort_sign((k,) + key)
            t = dc if sign > 0 else -dc
            out[nk] = out[nk] + t if nk in out else t
    return Form._raw(ch, out)


def interior(X: VectorField, w: Form) -> Form:
    """Contraction into the first slot."""
    _check(X, w)
    out: dict = {}
    for key, c in w.terms.items():
        for pos, k in enumerate(key):
            xk = X.comps[k]
            if xk.is_zero():
                continue
            nk = key[:pos] + key[pos + 1:]
            t = c * xk
            if pos % 2:
                t = -t
            out[nk] = out[nk] + t if nk in out else t
    return Form._raw(w.chart, out)


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def lie_derivative(X: VectorField, w: Form) -> Form:
    """Cartan formula L_X = d i_X + i_X d."""
    return ext_d(interior(X, w)) + interior(X, ext_d(w))


def pair_form_vector(xi: Form, X: VectorField) -> RatFunc:
    """xi(X) for a 1-form xi."""
    return interior(X, xi).scalar()


def clifford(s, phi: Form) -> Form:
    """(X + xi) . phi = i_X phi + xi ^ phi for a generalized section s."""
    return interior(s.vec, phi) + s.form.wedge(phi)


def bivector_action(A, B, phi: Form) -> Form:
    """Action of the bivector A^B: (A.B.phi - B.A.phi) / 2."""
    ab = clifford(A, clifford(B, phi))
    ba = clifford(B, clifford(A, phi))
    return (ab - ba) * (Scalar(1) / 2)


class SeriesDiverges(ArithmeticError):
    """The exponential series of a bivector did not terminate."""


def exp_bivector_action(eps, phi: Form, sign: int = -1) -> Form:
    """e^{sign * eps} . phi with eps = sum_k c_k A_k ^ B_k given as [(c_k, A_k, B_k)].

    Each A ^ B acts by (A.B - B.A)/2, so for eps = 1/2 A^B with <A, B> = 0
    the action is A.B/2.  The series must terminate within 2n + 1 terms.
    """
    ch = phi.chart

    def act(psi):
        out = Form.zero(ch)
        for c, A, B in eps:
            out = out + bivector_action(A, B, psi) * c
        return out

    total = phi
    term = phi
    for k in range(1, 2 * ch.dim + 2):
        term = act(term) * ch.rf(Scalar(sign) / k)
        if term.is_zero():
            return total
        total = total + term
    raise SeriesDiverges(f"bivector exponential did not terminate within {2 * ch.dim + 1} terms")
