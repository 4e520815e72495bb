"""Sections of TM + T*M: pairing, twisted Courant bracket, B-transforms, frames."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .algebra import NumericPoint, RatFunc, Scalar, ratfunc_solve
from .algebra.linalg import SingularMatrix, scalar_rank
from .algebra.ratfunc import eval_exact
from .calculus import (
    Chart,
    Form,
    VectorField,
    _coerce_coef,
    ext_d,
    interior,
    lie_bracket,
    lie_derivative,
    pair_form_vector,
)

FULL = "full"
HALF = "half"


class GSection:
    """X + xi with X a vector field and xi a 1-form."""

    __slots__ = ("vec", "form")

    def __init__(self, vec: VectorField, form: Form):
        if vec.chart != form.chart:
            raise ValueError("vector and form parts live on different charts")
        if form.degrees() - {1}:
            raise ValueError("form part of a generalized section must be a 1-form")
        self.vec = vec
        self.form = form

    @property
    def chart(self) -> Chart:
        return self.vec.chart

    @classmethod
    def zero(cls, chart: Chart) -> "GSection":
        return cls(chart.zero_vector(), Form.zero(chart))

    @classmethod
    def of_vector(cls, X: VectorField) -> "GSection":
        return cls(X, Form.zero(X.chart))

    @classmethod
    def of_form(cls, xi: Form) -> "GSection":
        return cls(xi.chart.zero_vector(), xi)

    @classmethod
    def from_components(cls, chart: Chart, comps) -> "GSection":
        d = chart.dim
        return cls(VectorField(chart, comps[:d]), Form.from_components(chart, comps[d:]))

    def components(self) -> list:
        return list(self.vec.comps) + self.form.components()

    def is_zero(self) -> bool:
        return self.vec.is_zero() and self.form.is_zero()

    def __add__(self, other):
        if not isinstance(other, GSection):
            return NotImplemented
        return GSection(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        if not isinstance(other, GSection):
            return NotImplemented
        return GSection(self.vec - other.vec, self.form - other.form)

    def __neg__(self):
        return GSection(-self.vec, -self.form)

    def __mul__(self, c):
        if _coerce_coef(self.chart, c) is None:
            return NotImplemented
        return GSection(self.vec * c, self.form * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GSection):
            return NotImplemented
        return self.vec == other.vec and self.form == other.form

    __hash__ = None

    def conj(self) -> "GSection":
        return GSection(self.vec.conj(), self.form.conj())

    def evaluate(self, p: NumericPoint) -> np.ndarray:
        return np.array([c.eval_values(p.w) for c in self.components()], dtype=complex)

    def __str__(self):
        v, f = str(self.vec), str(self.form)
        if v == "0":
            return f
        if f == "0":
            return v
        return f"{v} + {f}"

    def __repr__(self):
        return f"GSection({self})"


def anchor(s: GSection) -> VectorField:
    return s.vec


def pairing(a: GSection, b: GSection, convention: str = FULL) -> RatFunc:
    """<X+xi, Y+eta> = xi(Y) + eta(X); the 'half' convention divides by 2."""
    v = pair_form_vector(a.form, b.vec) + pair_form_vector(b.form, a.vec)
    if convention == FULL:
        return v
    if convention == HALF:
        return v * (Scalar(1) / 2)
    raise ValueError(f"unknown pairing convention {convention!r}")


@dataclass(frozen=True)
class TwistH:
    """Closed 3-form twisting the bracket; closedness checked on construction."""

    H: Form

    def __post_init__(self):
        if self.H.degrees() - {3}:
            raise ValueError("twisting form must be a 3-form")
        if not ext_d(self.H).is_zero():
            raise ValueError("twisting 3-form is not closed")

    @classmethod
    def zero(cls, chart: Chart) -> "TwistH":
        return cls(Form.zero(chart))


def courant_bracket(a: GSection, b: GSection, h: TwistH | None = None) -> GSection:
    """[X+xi, Y+eta]_H = [X,Y] + L_X eta - i_Y d xi + i_Y i_X H."""
    X, xi, Y, eta = a.vec, a.form, b.vec, b.form
    form = lie_derivative(X, eta) - interior(Y, ext_d(xi))
    if h is not None and not h.H.is_zero():
        form = form + interior(Y, interior(X, h.H))
    return GSection(lie_bracket(X, Y), form)


def b_transform(B: Form, a: GSection) -> GSection:
    """e^B(X + xi) = X + xi + i_X B."""
    if B.degrees() - {2}:
        raise ValueError("B-field must be a 2-form")
    return GSection(a.vec, a.form + interior(a.vec, B))


class NotInSpan(ArithmeticError):
    pass


@dataclass
class FrameBundle:
    """Finite list of sections spanning a subbundle of (TM + T*M) (x) C."""

    sections: list
    label: str = ""
    isotropic: bool = False
    seed: int = 0
    _rows: list | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.sections:
            raise ValueError("empty frame")
        self.sections = list(self.sections)
        if self.isotropic:
            for i, a in enumerate(self.sections):
                for b in self.sections[i:]:
                    if not pairing(a, b).is_zero():
                        raise ValueError(f"frame {self.label or ''} claimed isotropic but is not")

    @property
    def chart(self) -> Chart:
        return self.sections[0].chart

    def __len__(self):
        return len(self.sections)

    def __add__(self, other: "FrameBundle") -> "FrameBundle":
        return FrameBundle(self.sections + other.sections, f"{self.label}+{other.label}", seed=self.seed)

    def matrix(self) -> list:
        """Transition matrix: column j holds the components of section j."""
        cols = [s.components() for s in self.sections]
        return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]

    def gram(self, other: "FrameBundle | None" = None, convention: str = FULL) -> list:
        other = other or self
        return [[pairing(a, b, convention) for b in other.sections] for a in self.sections]

    def sample_rational_point(self):
        rng = random.Random(self.seed)
        ch = self.chart
        z = [Scalar(rng.randint(-7, 7) + 1, 0) / rng.randint(1, 5) + Scalar(0, rng.randint(-7, 7)) / rng.randint(1, 5)
             for _ in range(ch.n)]
        return z + [c.conj() for c in z]

    def rank_at(self, values) -> int:
        M = [[eval_exact(x, values) for x in row] for row in self.matrix()]
        return scalar_rank(M)

    def certify_rank(self) -> int:
        """Rank at a seeded rational point; a lower bound for the generic rank."""
        return self.rank_at(self.sample_rational_point())

    def pivot_rows(self) -> list:
        """Rows giving a nonsingular square minor at the seeded point."""
        if self._rows is None:
            values = self.sample_rational_point()
            M = [[eval_exact(x, values) for x in row] for row in self.matrix()]
            chosen: list = []
            for r in range(len(M)):
                if scalar_rank([M[i] for i in chosen + [r]]) == len(chosen) + 1:
                    chosen.append(r)
                if len(chosen) == len(self.sections):
                    break
            if len(chosen) < len(self.sections):
                raise SingularMatrix(f"frame {self.label!r} is rank-deficient at the seeded point")
            self._rows = chosen
        return self._rows


def expand_in_frame(s: GSection, F: FrameBundle) -> list:
    """Exact coefficients c with s = sum c_j F_j; raises NotInSpan otherwise."""
    M = F.matrix()
    rhs = s.components()
    rows = F.pivot_rows()
    c = ratfunc_solve([M[r] for r in rows], [rhs[r] for r in rows], F.chart.ring)
    residual = s - recombine(c, F)
    if not residual.is_zero():
        raise NotInSpan(f"section is not in the span of {F.label!r}; residual {residual}")
    return c


def recombine(coeffs, F: FrameBundle) -> GSection:
    out = GSection.zero(F.chart)
    for c, sec in zip(coeffs, F.sections):
        if not c.is_zero():
            out = out + sec * c
    return out


def project_onto(s: GSection, sub: FrameBundle, complement: FrameBundle) -> GSection:
    """Component of s in span(sub) along span(complement), exactly."""
    full = FrameBundle(sub.sections + complement.sections, f"{sub.label}+{complement.label}", seed=sub.seed)
    c = expand_in_frame(s, full)
    return recombine(c[: len(sub)], sub)


def project_orthogonal(s: GSection, sub: FrameBundle) -> GSection:
    """Projection onto span(sub) along its pairing-orthogonal complement.

    Requires the Gram matrix of sub to be nondegenerate; the coefficients
    solve G c = (<s, F_j>).
    """
    G = sub.gram()
    rhs = [pairing(s, f) for f in sub.sections]
    c = ratfunc_solve(G, rhs, sub.chart.ring)
    return recombine(c, sub)


def project_numeric(s: GSection, sub: FrameBundle, complement: FrameBundle, p: NumericPoint) -> np.ndarray:
    """Numeric components of the sub-part of s at p (fallback for large frames)."""
    cols = [f.evaluate(p) for f in sub.sections + complement.sections]
    M = np.array(cols).T
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= p.tol * max(1.0, sv[0]):
        raise SingularMatrix("degenerate span at the evaluation point")
    c = np.linalg.solve(M, s.evaluate(p))
    return M[:, : len(sub)] @ c[: len(sub)]
