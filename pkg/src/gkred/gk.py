"""Generalized Kahler data on C^n: bivector deformations of the flat structure.

The flat structure uses E_i = d/dz_i + dzb_i and F_i = d/dz_i - dzb_i with
L_+ = span{conj(E_i)}, L_- = span{conj(F_i)}.  A deformation
eps = 1/2 (sum f_i E_i) ^ (sum g_j F_j) with holomorphic f_i, g_j (scaled by
lambda) moves them to

    L_+^eps = span{conj(E_i) + f_i sum_p g_p F_p},
    L_-^eps = span{conj(F_i) + g_i sum_p f_p E_p}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .algebra import Poly, RatFunc, Scalar, ratfunc_solve_many
from .algebra.linalg import inverse, matmul
from .algebra.jets import JetSpace
from .calculus import Chart, Form, VectorField, exp_bivector_action, interior
from .courant import FrameBundle, GSection, courant_bracket, pairing
from .metric import GenMetric, LocalGeometry
from .reduction import LeafReduction, random_antihermitian, unitary_field


class NonIntegrable(ValueError):
    """The deformation violates the Maurer-Cartan equations."""


class NotGraphical(ArithmeticError):
    """V_+ or V_- fails to be a graph over TM."""


@dataclass
class Deformation:
    chart: Chart
    f: list
    g: list
    lam: Scalar = field(default_factory=lambda: Scalar(mpq(1, 10)))

    def __post_init__(self):
        n = self.chart.n
        if len(self.f) != n or len(self.g) != n:
            raise ValueError(f"need {n} coefficient functions f_i and g_i")
        ring = self.chart.ring
        self.f = [p if isinstance(p, Poly) else Poly.const(ring, p) for p in self.f]
        self.g = [p if isinstance(p, Poly) else Poly.const(ring, p) for p in self.g]
        for p in self.f + self.g:
            if not p.is_holomorphic():
                raise ValueError(f"deformation coefficient {p} depends on conjugate variables")
        self.lam = Scalar.coerce(self.lam)

    @property
    def f_eff(self) -> list:
        """f_i multiplied by lambda (the deformation actually applied)."""
        return [p.scale(self.lam) for p in self.f]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.f) or all(p.is_zero() for p in self.g)

    def scaled(self, lam) -> "Deformation":
        return Deformation(self.chart, self.f, self.g, Scalar.coerce(lam))


def standard_sections(chart: Chart):
    """E_i, F_i and their conjugates."""
    n = chart.n
    E = [GSection(chart.pz(i), chart.dzb(i)) for i in range(n)]
    F = [GSection(chart.pz(i), -chart.dzb(i)) for i in range(n)]
    return E, F, [e.conj() for e in E], [x.conj() for x in F]


def mc_residual(d: Deformation) -> dict:
    """Residuals of the Maurer-Cartan system for holomorphic f, g.

    Returns {(k, q): (sum_p f_p (g_k d_p g_q - g_q d_p g_k),
                      sum_p g_p (f_k d_p f_q - f_q d_p f_k))}.
    """
    n = d.chart.n
    f, g = d.f_eff, d.g
    df = [[p.partial(q) for q in range(n)] for p in f]
    dg = [[p.partial(q) for q in range(n)] for p in g]
    out = {}
    for k in range(n):
        for q in range(n):
            r1 = sum((f[p] * (g[k] * dg[q][p] - g[q] * dg[k][p]) for p in range(n)), d.chart.ring.zero())
            r2 = sum((g[p] * (f[k] * df[q][p] - f[q] * df[k][p]) for p in range(n)), d.chart.ring.zero())
            out[(k, q)] = (r1, r2)
    return out


def mc_is_zero(res: dict) -> bool:
    return all(a.is_zero() and b.is_zero() for a, b in res.values())


@dataclass
class DeformedFrames:
    deformation: Deformation
    Lp: list
    Lm: list
    G: GSection
    C: GSection

    @property
    def chart(self) -> Chart:
        return self.deformation.chart

    @property
    def Lp_bar(self):
        return [s.conj() for s in self.Lp]

    @property
    def Lm_bar(self):
        return [s.conj() for s in self.Lm]

    def Vp(self) -> FrameBundle:
        return FrameBundle(self.Lp + self.Lp_bar, "V+")

    def Vm(self) -> FrameBundle:
        return FrameBundle(self.Lm + self.Lm_bar, "V-")

    def tangent_01(self, sign: int) -> list:
        """Anti-holomorphic tangent frames T^{+/-}_{0,1} (anchors of L_+/-)."""
        return [s.vec for s in (self.Lp if sign > 0 else self.Lm)]

    def certificates(self) -> dict:
        """Exact isotropy/orthogonality of L_+, L_- and orthogonality V_+ vs V_-."""
        out = {}
        out["L+ isotropic"] = all(pairing(a, b).is_zero() for a in self.Lp for b in self.Lp)
        out["L- isotropic"] = all(pairing(a, b).is_zero() for a in self.Lm for b in self.Lm)
        out["L+ perp L-"] = all(pairing(a, b).is_zero() for a in self.Lp for b in self.Lm)
        out["L+ perp conj(L-)"] = all(pairing(a, b).is_zero() for a in self.Lp for b in self.Lm_bar)
        return out


def deformed_frames(d: Deformation, allow_nonintegrable: bool = False) -> DeformedFrames:
    if not allow_nonintegrable and not mc_is_zero(mc_residual(d)):
        raise NonIntegrable("Maurer-Cartan residual is nonzero; pass allow_nonintegrable to continue")
    ch = d.chart
    n = ch.n
    E, F, Eb, Fb = standard_sections(ch)
    f = d.f_eff
    G = GSection.zero(ch)
    C = GSection.zero(ch)
    for p in range(n):
        G = G + F[p] * d.g[p]
        C = C + E[p] * f[p]
    Lp = [Eb[i] + G * f[i] for i in range(n)]
    Lm = [Fb[i] + C * d.g[i] for i in range(n)]
    return DeformedFrames(d, Lp, Lm, G, C)


def _graph_map(frame: list, chart: Chart):
    """Matrix phi with form = phi @ tangent for every section of the frame."""
    d = chart.dim
    T = [[s.vec.comps[r] for s in frame] for r in range(d)]
    A = [[s.form.components()[r] for s in frame] for r in range(d)]
    # phi T = A  <=>  T^t phi^t = A^t ; the r-th row of phi solves T^t x = (row r of A)
    Tt = [[T[c][r] for c in range(d)] for r in range(d)]
    try:
        rows = ratfunc_solve_many(Tt, [A[r] for r in range(d)], chart.ring)
    except ArithmeticError as exc:
        raise NotGraphical(str(exc)) from exc
    return rows


@dataclass
class BiHermitian:
    g: list           # metric tensor g[k][l]
    b: list           # 2-form tensor b[k][l]
    Jp: list          # endomorphism matrices acting on vector components
    Jm: list
    metric: GenMetric


def complex_structure(chart: Chart, t01: list):
    """J with the given (0,1) frame as -i eigenvectors and its conjugate as +i."""
    d = chart.dim
    cols = [v.conj() for v in t01] + list(t01)
    P = [[cols[c].comps[r] for c in range(d)] for r in range(d)]
    eig = [Scalar(0, 1)] * (d // 2) + [Scalar(0, -1)] * (d // 2)
    # J = P D P^{-1}:  solve P^t J^t = (P D)^t, row r of J solves P^t x = (P D)[r]
    PD = [[P[r][c] * eig[c] for c in range(d)] for r in range(d)]
    Pt = [[P[c][r] for c in range(d)] for r in range(d)]
    return ratfunc_solve_many(Pt, PD, chart.ring)


def extract_bihermitian(df: DeformedFrames, seed: int = 0) -> BiHermitian:
    ch = df.chart
    d = ch.dim
    phi_p = _graph_map(df.Lp + df.Lp_bar, ch)
    phi_m = _graph_map(df.Lm + df.Lm_bar, ch)
    half = Scalar(1) / 2
    gmap = [[(phi_p[r][c] - phi_m[r][c]) * half for c in range(d)] for r in range(d)]
    bmap = [[(phi_p[r][c] + phi_m[r][c]) * half for c in range(d)] for r in range(d)]
    g = gmap
    b = [[bmap[c][r] for c in range(d)] for r in range(d)]
    metric = GenMetric(ch, g, b, seed=seed)
    Jp = complex_structure(ch, df.tangent_01(+1))
    Jm = complex_structure(ch, df.tangent_01(-1))
    return BiHermitian(g, b, Jp, Jm, metric)


def j_squares_to_minus_one(J: list) -> bool:
    """True when J^2 = -1 exactly."""
    d = len(J)
    J2 = matmul(J, J)
    return all((J2[i][j] + (1 if i == j else 0)) == 0 for i in range(d) for j in range(d))


def j_compatible(J: list, g: list) -> bool:
    """True when J^t g J = g exactly."""
    d = len(J)
    Jt = [[J[c][r] for c in range(d)] for r in range(d)]
    M = matmul(matmul(Jt, g), J)
    return all(M[i][j] == g[i][j] for i in range(d) for j in range(d))


def apply_matrix(M: list, X: VectorField) -> VectorField:
    d = len(M)
    return VectorField(X.chart, [sum((M[r][c] * X.comps[c] for c in range(d)), X.chart.zero_rf()) for r in range(d)])


# ---------------------------------------------------------------------------
# the circle action on C^n


def rotation_field(chart: Chart) -> VectorField:
    """d_theta = i sum (z_j d/dz_j - zb_j d/dzb_j)."""
    n = chart.n
    I = Scalar(0, 1)
    comps = [chart.z(j) * I for j in range(n)] + [chart.zb(j) * (-I) for j in range(n)]
    return VectorField(chart, comps)


def sphere_moment_map(chart: Chart) -> Poly:
    ring = chart.ring
    return sum((chart.z(j) * chart.zb(j) for j in range(chart.n)), ring.zero()) - 1


def standard_kahler_form(chart: Chart) -> Form:
    I = Scalar(0, 1)
    w = Form.zero(chart)
    for j in range(chart.n):
        w = w + (chart.dz(j) ^ chart.dzb(j)) * I
    return w


# ---------------------------------------------------------------------------
# pure spinors and the type-jumping locus


def holomorphic_volume(chart: Chart) -> Form:
    phi = Form.function(chart, 1)
    for j in range(chart.n):
        phi = phi ^ chart.dz(j)
    return phi


def deformed_spinor(d: Deformation) -> Form:
    """e^{-eps} . phi_1 with eps = 1/2 A ^ B, A = sum f_i E_i, B = sum g_j F_j."""
    ch = d.chart
    E, F, _, _ = standard_sections(ch)
    A = GSection.zero(ch)
    B = GSection.zero(ch)
    for i in range(ch.n):
        A = A + E[i] * d.f_eff[i]
        B = B + F[i] * d.g[i]
    return exp_bivector_action([(Scalar(1) / 2, A, B)], holomorphic_volume(ch))


def triple_product_cubic(d: Deformation) -> Poly:
    """det[f; g; z] (the three-dimensional case)."""
    ch = d.chart
    if ch.n != 3:
        raise ValueError("the triple-product locus is defined for C^3")
    f, g = d.f_eff, d.g
    z = [ch.z(i) for i in range(3)]
    rows = [f, g, z]
    out = ch.ring.zero()
    for perm, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1), ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        out = out + rows[0][perm[0]] * rows[1][perm[1]] * rows[2][perm[2]] * sign
    return out


def displayed_cubic(d: Deformation) -> Poly:
    """z0(f1 - f2) + z1(f2 - f0) + z2(f0 - f1), valid for g_i = 1."""
    ch = d.chart
    f = d.f_eff
    z = [ch.z(i) for i in range(3)]
    return z[0] * (f[1] - f[2]) + z[1] * (f[2] - f[0]) + z[2] * (f[0] - f[1])


def proportionality(a: Poly, b: Poly):
    """Nonzero scalar c with a = c b, or None."""
    if a.is_zero() or b.is_zero():
        return None
    ka, va = a.leading()
    kb, vb = b.leading()
    if ka != kb:
        return None
    c = Scalar.pair(va) / Scalar.pair(vb)
    return c if a == b.scale(c) else None


@dataclass
class TypeLocus:
    rho: Poly
    displayed: Poly | None
    triple: Poly | None
    ratio_displayed: Scalar | None
    ratio_triple: Scalar | None

    @property
    def has_locus(self) -> bool:
        return not self.rho.is_zero()


def type_locus(d: Deformation, V: VectorField | None = None) -> TypeLocus:
    """Degree-0 part of i_V e^{-eps} phi_1 and its comparison to the cubic formulas."""
    ch = d.chart
    V = V or rotation_field(ch)
    rho_rf = interior(V, deformed_spinor(d)).scalar()
    rho = rho_rf.as_poly()
    displayed = triple = None
    rd = rt = None
    if ch.n == 3:
        triple = triple_product_cubic(d)
        rt = proportionality(rho, triple)
        if all(p == 1 for p in d.g):
            displayed = displayed_cubic(d)
            rd = proportionality(rho, displayed)
    return TypeLocus(rho, displayed, triple, rd, rt)


# ---------------------------------------------------------------------------
# tau_{+/-}^{0,1} sections and the holomorphy brackets


def _alpha_beta(df: DeformedFrames):
    """dmu of the anchors: alpha_i = dmu(pi(Lp_i)), beta_i = dmu(pi(Lm_i)).

    For mu = sum |z|^2 - 1 these are z_i + f_i sum_p g_p zb_p and z_i + g_i h
    with h = sum_p f_p zb_p.
    """
    mu = sphere_moment_map(df.chart)
    alpha = [s.vec.apply(mu) for s in df.Lp]
    beta = [s.vec.apply(mu) for s in df.Lm]
    return alpha, beta


def tau01_sections(df: DeformedFrames):
    """A_k = -alpha_k Lp_0 + alpha_0 Lp_k and B_k = -beta_k Lm_0 + beta_0 Lm_k, k >= 1.

    Their anchors are annihilated by dmu, so they span the lifts of
    tau_+^{0,1} (inside V_+) and tau_-^{0,1} (inside V_-) along the sphere.
    """
    alpha, beta = _alpha_beta(df)
    n = df.chart.n
    A = [df.Lp[0] * (-alpha[k]) + df.Lp[k] * alpha[0] for k in range(1, n)]
    B = [df.Lm[0] * (-beta[k]) + df.Lm[k] * beta[0] for k in range(1, n)]
    return A, B


def _block_part(s: GSection, L: list, Lbar: list, Ninv: list) -> GSection:
    """Component of s in span(L + Lbar) along its pairing-orthogonal complement.

    L and Lbar are isotropic, so the Gram matrix is [[0, N], [N^t, 0]] with
    N[i][j] = <L_i, Lbar_j>; the coefficients of L solve N^t c = <s, Lbar>.
    """
    ch = s.chart
    k = len(L)
    u = [pairing(s, x) for x in Lbar]
    v = [pairing(s, x) for x in L]
    out = GSection.zero(ch)
    for i in range(k):
        c = sum((Ninv[j][i] * u[j] for j in range(k)), ch.zero_rf())
        d = sum((Ninv[i][j] * v[j] for j in range(k)), ch.zero_rf())
        out = out + L[i] * c + Lbar[i] * d
    return out


def _pairing_inverse(df: DeformedFrames, sign: int) -> list:
    key = "_ninv_plus" if sign > 0 else "_ninv_minus"
    cached = df.__dict__.get(key)
    if cached is None:
        L = df.Lp if sign > 0 else df.Lm
        Lbar = df.Lp_bar if sign > 0 else df.Lm_bar
        cached = inverse([[pairing(a, b) for b in Lbar] for a in L], df.chart.ring)
        df.__dict__[key] = cached
    return cached


def plus_part(s: GSection, df: DeformedFrames) -> GSection:
    """V_+ component of s along V_-."""
    return _block_part(s, df.Lp, df.Lp_bar, _pairing_inverse(df, +1))


def minus_part(s: GSection, df: DeformedFrames) -> GSection:
    """V_- component of s along V_+ (V_+ and V_- are pairing-orthogonal)."""
    return _block_part(s, df.Lm, df.Lm_bar, _pairing_inverse(df, -1))


def bracket_minus(a: GSection, b: GSection, df: DeformedFrames) -> GSection:
    return minus_part(courant_bracket(a, b), df)


def frame_bracket_formula(df: DeformedFrames, i: int) -> GSection:
    """sum_q d_q f_i (conj(F_q) + C) - sum_q d_q f_i (conj(E_q) + f_q F), F = sum F_p.

    Closed form of [conj(E_i) + f_i F, conj(F_j) + C] for g_p = 1 when
    sum_p d_p f_i = 0; it does not depend on j.
    """
    ch = df.chart
    f = df.deformation.f_eff
    out = GSection.zero(ch)
    for q in range(ch.n):
        c = f[i].partial(q)
        out = out + (df.Lm[q] - df.Lp[q]) * c
    return out


def _dsum(df: DeformedFrames, s: int) -> GSection:
    """sum_q d_q f_s (conj(F_q) + g_q C)."""
    f = df.deformation.f_eff
    out = GSection.zero(df.chart)
    for q in range(df.chart.n):
        out = out + df.Lm[q] * f[s].partial(q)
    return out


def bracket_minus_closed_form(df: DeformedFrames, i: int, j: int) -> GSection:
    """Closed form of [A_i, B_j]^- valid for g_p = 1 and sum_p d_p f_s = 0.

    Expanding A_i, B_j and using pi(Lp_s)(beta_t) = 2 f_s gives
        sum_s c_s a_s [(z_0 - z_j) D_s + 2 f_s (conj(F_j) - conj(F_0))]
    over s in {0, i}, with (c_0, a_0) = (-1, alpha_i), (c_i, a_i) = (1, alpha_0)
    and D_s = sum_q d_q f_s (conj(F_q) + C).
    """
    ch = df.chart
    alpha, _ = _alpha_beta(df)
    f = df.deformation.f_eff
    _, _, _, Fb = standard_sections(ch)
    zdiff = ch.z(0) - ch.z(j)
    out = GSection.zero(ch)
    for s, c, a in ((0, -1, alpha[i]), (i, 1, alpha[0])):
        term = _dsum(df, s) * zdiff + (Fb[j] - Fb[0]) * (f[s] * 2)
        out = out + term * (a * c)
    return out


def appendix_display(df: DeformedFrames, i: int) -> GSection:
    """The four-term display for [A_i, B_1]^- with F-bar sections (i = 1, 2, C^3).

    (z_i + f_i zb)(z_1 - z_0) sum_q d_q f_0 Fb_q + 2 f_0 (z_i + f_i zb)(Fb_0 - Fb_1)
      + (z_0 + f_0 zb)(z_0 - z_1) sum_q d_q f_i Fb_q + 2 f_i (z_0 + f_0 zb)(Fb_1 - Fb_0),
    with zb = zb_0 + zb_1 + zb_2.
    """
    ch = df.chart
    if ch.n != 3 or i not in (1, 2):
        raise ValueError("the displayed forms cover [A_1, B_1]^- and [A_2, B_1]^- on C^3")
    f = df.deformation.f_eff
    z = [ch.z(k) for k in range(3)]
    zb = ch.zb(0) + ch.zb(1) + ch.zb(2)
    _, _, _, Fb = standard_sections(ch)

    def dsum(s):
        out = GSection.zero(ch)
        for q in range(3):
            out = out + Fb[q] * f[s].partial(q)
        return out

    ai = z[i] + f[i] * zb
    a0 = z[0] + f[0] * zb
    return (dsum(0) * (ai * (z[1] - z[0])) + (Fb[0] - Fb[1]) * (f[0] * ai * 2)
            + dsum(i) * (a0 * (z[0] - z[1])) + (Fb[1] - Fb[0]) * (f[i] * a0 * 2))


def dmu_contraction(s: GSection, mu: Poly) -> RatFunc:
    return s.vec.apply(mu)


# ---------------------------------------------------------------------------
# jet versions of the biHermitian data (numeric, one point at a time)


@dataclass
class JetBiHermitian:
    g: np.ndarray
    b: np.ndarray
    Jp: np.ndarray
    Jm: np.ndarray


def _jet_matrix(js, rows):
    return js.from_exact_array(np.array(rows, dtype=object))


def _jet_graph_map(js, frame: list, chart: Chart) -> np.ndarray:
    d = chart.dim
    T = _jet_matrix(js, [[s.vec.comps[r] for s in frame] for r in range(d)])
    A = _jet_matrix(js, [[s.form.components()[r] for s in frame] for r in range(d)])
    return js.einsum("rc,ck->rk", A, js.matinv(T))


def _jet_complex_structure(js, t01: list, chart: Chart) -> np.ndarray:
    d = chart.dim
    cols = [v.conj() for v in t01] + list(t01)
    P = _jet_matrix(js, [[cols[c].comps[r] for c in range(d)] for r in range(d)])
    eig = np.array([1j] * (d // 2) + [-1j] * (d // 2))
    return js.einsum("rc,ck->rk", P * eig[None, :, None], js.matinv(P))


def jet_bihermitian(df: DeformedFrames, js) -> JetBiHermitian:
    ch = df.chart
    phi_p = _jet_graph_map(js, df.Lp + df.Lp_bar, ch)
    phi_m = _jet_graph_map(js, df.Lm + df.Lm_bar, ch)
    g = 0.5 * (phi_p - phi_m)
    b = np.transpose(0.5 * (phi_p + phi_m), (1, 0, 2))
    return JetBiHermitian(g, b, _jet_complex_structure(js, df.tangent_01(+1), ch),
                          _jet_complex_structure(js, df.tangent_01(-1), ch))


# ---------------------------------------------------------------------------
# numeric checks at sample points of the sphere


def sphere_points(seed: int, count: int, n: int = 3) -> list:
    """Seeded points on the unit sphere of C^n (normalized complex Gaussians)."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        pts.append(z / np.linalg.norm(z))
    return pts


def _jet_form(js, chart: Chart, form: Form) -> np.ndarray:
    return js.from_exact_array(np.array(form.components(), dtype=object))


def _jet_differential(js, p: Poly) -> np.ndarray:
    j = js.from_poly(p)
    return np.array([js.d(j, k) for k in range(js.nvars)])


@dataclass
class PointData:
    """biHermitian data, the circle action and its leafwise reduction at one point."""

    js: object
    bh: JetBiHermitian
    geom: object
    lr: object
    V: np.ndarray
    xi: np.ndarray
    dmu: np.ndarray


def point_data(df: DeformedFrames, z, order: int = 1, mu: Poly | None = None, sigma: Poly | None = None,
               xi_mode: str = "metric", xi_extra: Form | None = None, V: VectorField | None = None) -> PointData:
    """Assemble jets of (g, b, J_+, J_-) at z and the reduction by the circle action.

    ``xi_mode`` is "metric" for xi = -i_V b (the trivially extended action moved
    to the metric splitting) or "zero" for xi = 0.  ``xi_extra`` is added to xi
    (used for negative controls).  ``sigma`` cuts out the level set (default mu).
    """
    ch = df.chart
    z = np.asarray(z, dtype=complex)
    js_ = JetSpace(np.concatenate([z, z.conj()]), order)
    bh = jet_bihermitian(df, js_)
    geom = LocalGeometry(js_, bh.g, bh.b)
    V = V if V is not None else rotation_field(ch)
    Vj = js_.from_exact_array(np.array(V.comps, dtype=object))
    if xi_mode == "metric":
        xi = -geom.bvec(Vj)
    elif xi_mode == "zero":
        xi = js_.zeros((ch.dim,))
    else:
        raise ValueError(f"unknown xi mode {xi_mode!r}")
    if xi_extra is not None:
        xi = xi + _jet_form(js_, ch, xi_extra)
    mu = mu if mu is not None else sphere_moment_map(ch)
    dmu = np.array([_jet_differential(js_, mu)])
    dsig = dmu if sigma is None else np.array([_jet_differential(js_, sigma)])
    lr = LeafReduction(geom, np.array([Vj]), np.array([xi]), dsig)
    return PointData(js_, bh, geom, lr, np.array([Vj]), np.array([xi]), dmu)


def hamiltonian_residuals(pd: PointData, mu: Poly | None = None) -> tuple:
    """max |J_+ V^+ + g^{-1} d mu| and max |J_- V^- + g^{-1} d mu| at the point.

    V^{+/-} = V +/- g^{-1} xi are the ambient lifts.  ``mu`` overrides the moment
    map used in the residual (negative controls); the reduction data are unchanged.
    """
    js, g = pd.js, pd.geom
    dmu = pd.dmu[0] if mu is None else _jet_differential(js, mu)
    gd = g.sharp(dmu)
    s = g.sharp(pd.xi[0])
    rp = js.einsum("ij,j->i", pd.bh.Jp, pd.V[0] + s) + gd
    rm = js.einsum("ij,j->i", pd.bh.Jm, pd.V[0] - s) + gd
    return float(np.abs(js.value(rp)).max()), float(np.abs(js.value(rm)).max())


def hamiltonian_check(df: DeformedFrames, points: list, mu: Poly | None = None, xi_mode: str = "metric") -> np.ndarray:
    """Hamiltonian residuals (J_+ and J_- rows) at each point; shape (len(points), 2)."""
    out = []
    for z in points:
        pd = point_data(df, z, order=1, xi_mode=xi_mode)
        out.append(hamiltonian_residuals(pd, mu))
    return np.array(out)


def _apply_jet(js, J, X):
    return js.einsum("ij,j->i", J, X)


def tau_basis(pd: PointData, sign: int, kind: str, fields: list) -> list:
    """(0,1) or (1,0) parts of the tau_+/- lifts of the base fields."""
    J = pd.bh.Jp if sign > 0 else pd.bh.Jm
    s = 1j if kind == "01" else -1j
    out = []
    for U in fields:
        X = pd.lr.lift(U, sign)
        out.append(0.5 * (X + s * _apply_jet(pd.js, J, X)))
    return out


def base_fields(js, rng: np.random.Generator, count: int, n: int = 3) -> list:
    return [unitary_field(js, random_antihermitian(rng, n)) for _ in range(count)]


@dataclass
class HolomorphyResult:
    """Per-pair residuals of the generalized holomorphy criterion at one point."""

    R_formula: float
    R_definition: float
    R_ambient: float
    hrc: float
    nonvertical: float


def holomorphy_at(pd: PointData, Xs: list, Ys: list) -> list:
    """Relative curvature R^a and d mu(nabla^-_X Y) for X in tau_+^{0,1}, Y in tau_-^{0,1}."""
    lr = pd.lr
    out = []
    for X in Xs:
        for Y in Ys:
            coef, rest = lr.relative_curvature_def(X, Y)
            out.append(HolomorphyResult(
                float(np.abs(lr.relative_curvature_formula(X, Y)).max()),
                float(np.abs(coef).max()),
                float(np.abs(lr.relative_curvature_ambient(X, Y)).max()),
                float(np.abs(lr.holomorphy_residual(X, Y)).max()),
                rest,
            ))
    return out


def holomorphy_check(df: DeformedFrames, points: list, seed: int = 0, nfields: int = 2) -> list:
    """Numeric holomorphy residuals: for each point a list of HolomorphyResult."""
    rng = np.random.default_rng(seed)
    res = []
    for z in points:
        pd = point_data(df, z, order=1)
        U = base_fields(pd.js, rng, nfields)
        res.append(holomorphy_at(pd, tau_basis(pd, +1, "01", U), tau_basis(pd, -1, "01", U)))
    return res


def appendix_identification(df: DeformedFrames, z) -> dict:
    """How the exact sections A_i, B_j sit inside the numeric data at z.

    Returns max residuals of: form part of A_i against (b + g) pi(A_i) (A_i in V_+),
    form part of B_j against (b - g) pi(B_j), J_+ pi(A_i) + i pi(A_i) (anti-holomorphic),
    the tau_+ condition g(pi A_i, V) + xi(pi A_i), and
    pi([A_i, B_j]^-) against nabla^-_{pi A_i} pi B_j.
    """
    pd = point_data(df, z, order=1)
    js, g = pd.js, pd.geom
    A, B = tau01_sections(df)
    jv = lambda s: js.from_exact_array(np.array(s.vec.comps, dtype=object))
    jf = lambda s: js.from_exact_array(np.array(s.form.components(), dtype=object))
    out = {"A in V+": 0.0, "B in V-": 0.0, "A anti-holomorphic": 0.0, "B anti-holomorphic": 0.0,
           "A in tau+": 0.0, "B in tau-": 0.0, "bracket = nabla-": 0.0}
    val = lambda a: float(np.abs(js.value(a)).max())
    for a in A:
        X, w = jv(a), jf(a)
        out["A in V+"] = max(out["A in V+"], val(w - js.einsum("ji,j->i", pd.bh.b + pd.bh.g, X)))
        out["A anti-holomorphic"] = max(out["A anti-holomorphic"], val(_apply_jet(js, pd.bh.Jp, X) + 1j * X))
        out["A in tau+"] = max(out["A in tau+"], val(g.pair(g.flat(pd.V[0]) + pd.xi[0], X)))
    for b in B:
        Y, w = jv(b), jf(b)
        out["B in V-"] = max(out["B in V-"], val(w - js.einsum("ji,j->i", pd.bh.b - pd.bh.g, Y)))
        out["B anti-holomorphic"] = max(out["B anti-holomorphic"], val(_apply_jet(js, pd.bh.Jm, Y) + 1j * Y))
        out["B in tau-"] = max(out["B in tau-"], val(g.pair(g.flat(pd.V[0]) - pd.xi[0], Y)))
    for a in A:
        for b in B:
            br = bracket_minus(a, b, df)
            lhs = js.from_exact_array(np.array(br.vec.comps, dtype=object))
            out["bracket = nabla-"] = max(out["bracket = nabla-"], val(lhs - g.cov(jv(a), jv(b), -1)))
    return out


def type_11_residuals(pd: PointData, fields: list) -> tuple:
    """max |d xi^+(X, Y)| over X, Y in tau_+^{1,0} and max |d xi^-(X, Y)| over tau_-^{1,0}."""
    g, lr = pd.geom, pd.lr
    res = []
    for sign, forms in ((+1, lr.xi_plus), (-1, lr.xi_minus)):
        basis = tau_basis(pd, sign, "10", fields)
        worst = 0.0
        for a in range(lr.m):
            w = g.d1(forms[a])
            for i, X in enumerate(basis):
                for Y in basis[i + 1:]:
                    worst = max(worst, float(abs(pd.js.value(g.eval2(w, X, Y)))))
        res.append(worst)
    return tuple(res)


def complex_structure_preserves_tau(pd: PointData, fields: list) -> float:
    """max over fields of the tau_+/- and sphere-tangency residuals of J_+/- applied to tau lifts."""
    js, g, lr = pd.js, pd.geom, pd.lr
    worst = 0.0
    for sign, J in ((+1, pd.bh.Jp), (-1, pd.bh.Jm)):
        xs = lr.xi_plus if sign > 0 else lr.xi_minus
        for U in fields:
            JX = _apply_jet(js, J, lr.lift(U, sign))
            for r in (g.pair(xs[0], JX), g.pair(pd.dmu[0], JX)):
                worst = max(worst, float(abs(js.value(r))))
    return worst


def type_11_check(df: DeformedFrames, points: list, seed: int = 0, xi_extra: Form | None = None,
                  nfields: int = 4) -> np.ndarray:
    """(1,1) residuals for (tau_+, tau_-) at each point; shape (len(points), 2)."""
    rng = np.random.default_rng(seed)
    out = []
    for z in points:
        pd = point_data(df, z, order=1, xi_extra=xi_extra)
        out.append(type_11_residuals(pd, base_fields(pd.js, rng, nfields)))
    return np.array(out)


def non_hamiltonian_perturbation(chart: Chart, s=1) -> Form:
    """s * i(zb0 dzb1 - z0 dz1): a real 1-form whose differential has type (2,0) + (0,2).

    Adding it to xi breaks d xi = i_V H and makes d xi^+ acquire a (2,0) part, so
    the (1,1) check must reject it.
    """
    w = chart.dzb(1) * chart.zb(0) - chart.dz(1) * chart.z(0)
    return w * (Scalar(0, 1) * Scalar.coerce(s))
