"""Generalized metrics, Levi-Civita and Bismut connections.

Tensors are stored on the Wirtinger frame d/dw_k: ``g[k][l] = g(d_k, d_l)``,
``b[k][l] = b(d_k, d_l)``.  Christoffel tables follow
``nabla_{d_i} d_j = sum_k G[k][i][j] d_k``.  Exact tables hold RatFunc values;
``LocalGeometry`` provides the same operations on Taylor jets at a point.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .algebra import Poly, RatFunc, Scalar, ratfunc_solve_many
from .algebra.jets import JetSpace
from .algebra.ratfunc import eval_exact
from .calculus import Chart, Form, VectorField, ext_d, wedge
from .courant import GSection, TwistH, courant_bracket

HALF = Scalar(1) / 2


class DegenerateMetric(ArithmeticError):
    pass


def _sample_values(chart: Chart, seed: int):
    rng = random.Random(seed)
    z = [Scalar(rng.randint(-9, 9), rng.randint(-9, 9)) / rng.randint(1, 4) for _ in range(chart.n)]
    return z + [c.conj() for c in z]


def real_frame(n: int) -> np.ndarray:
    """Columns express d/dx_i, d/dy_i in the Wirtinger frame."""
    U = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        U[i, i], U[n + i, i] = 1, 1
        U[i, n + i], U[n + i, n + i] = 1j, -1j
    return U


def real_matrix(g: np.ndarray) -> np.ndarray:
    """Bilinear form on the real frame d/dx, d/dy from Wirtinger components."""
    U = real_frame(g.shape[0] // 2)
    return U.T @ g @ U


class GenMetric:
    """Generalized metric given by (g, b) in a splitting twisted by h."""

    def __init__(self, chart: Chart, g, b=None, h: TwistH | None = None, seed: int = 0):
        d = chart.dim
        self.chart = chart
        self.g = [[chart.rf(g[i][j]) for j in range(d)] for i in range(d)]
        if b is None:
            b = [[0] * d for _ in range(d)]
        self.b = [[chart.rf(b[i][j]) for j in range(d)] for i in range(d)]
        self.h = h or TwistH.zero(chart)
        for i in range(d):
            for j in range(i, d):
                if self.g[i][j] != self.g[j][i]:
                    raise ValueError(f"metric not symmetric at ({i},{j})")
                if self.b[i][j] != -self.b[j][i]:
                    raise ValueError(f"b-field not antisymmetric at ({i},{j})")
        vals = _sample_values(chart, seed)
        G = np.array([[complex(eval_exact(x, vals)) for x in row] for row in self.g])
        if abs(np.linalg.det(G)) < 1e-12:
            raise DegenerateMetric("metric determinant vanishes at the seeded point")
        self._ginv = None

    @property
    def ginv(self):
        if self._ginv is None:
            d = self.chart.dim
            cols = [[1 if i == c else 0 for i in range(d)] for c in range(d)]
            X = ratfunc_solve_many(self.g, cols, self.chart.ring)
            self._ginv = [[X[c][r] for c in range(d)] for r in range(d)]
        return self._ginv

    def gvec(self, X: VectorField) -> Form:
        """The 1-form g(X, .)."""
        d = self.chart.dim
        return Form.from_components(self.chart, [sum((X.comps[k] * self.g[k][l] for k in range(d)), self.chart.zero_rf()) for l in range(d)])

    def bvec(self, X: VectorField) -> Form:
        """i_X b = b(X, .)."""
        d = self.chart.dim
        return Form.from_components(self.chart, [sum((X.comps[k] * self.b[k][l] for k in range(d)), self.chart.zero_rf()) for l in range(d)])

    def sharp(self, a: Form) -> VectorField:
        """g^{-1} a."""
        comps = a.components()
        d = self.chart.dim
        gi = self.ginv
        return VectorField(self.chart, [sum((gi[k][l] * comps[l] for l in range(d)), self.chart.zero_rf()) for k in range(d)])

    def inner(self, X: VectorField, Y: VectorField) -> RatFunc:
        d = self.chart.dim
        out = self.chart.zero_rf()
        for k in range(d):
            if X.comps[k].is_zero():
                continue
            for l in range(d):
                if not Y.comps[l].is_zero() and not self.g[k][l].is_zero():
                    out = out + X.comps[k] * self.g[k][l] * Y.comps[l]
        return out

    def graph(self, X: VectorField, sign: int) -> GSection:
        """X + (b + sign*g)(X), a section of V_+ (sign=1) or V_- (sign=-1)."""
        form = self.bvec(X) + self.gvec(X) * sign
        return GSection(X, form)

    def positivity(self, points) -> list:
        """Smallest eigenvalue of g on real vectors at each numeric point."""
        out = []
        for p in points:
            G = np.array([[x.eval_values(p.w) for x in row] for row in self.g])
            Gr = real_matrix(G)
            out.append(float(np.min(np.linalg.eigvalsh(0.5 * (Gr + Gr.T).real))))
        return out


class Connection:
    """Affine connection given by an exact Christoffel table."""

    def __init__(self, chart: Chart, table):
        self.chart = chart
        self.table = table  # table[k][i][j]

    def covariant(self, X: VectorField, Y: VectorField) -> VectorField:
        d = self.chart.dim
        comps = []
        for k in range(d):
            acc = X.apply(Y.comps[k])
            Gk = self.table[k]
            for i in range(d):
                if X.comps[i].is_zero():
                    continue
                for j in range(d):
                    if Y.comps[j].is_zero() or Gk[i][j].is_zero():
                        continue
                    acc = acc + Gk[i][j] * X.comps[i] * Y.comps[j]
            comps.append(acc)
        return VectorField(self.chart, comps)

    def torsion(self, X: VectorField, Y: VectorField) -> VectorField:
        from .calculus import lie_bracket

        return self.covariant(X, Y) - self.covariant(Y, X) - lie_bracket(X, Y)

    def __sub__(self, other: "Connection") -> list:
        d = self.chart.dim
        return [[[self.table[k][i][j] - other.table[k][i][j] for j in range(d)] for i in range(d)] for k in range(d)]


def _metric_derivs(gm: GenMetric):
    d = gm.chart.dim
    return [[[gm.g[i][j].partial(k) for j in range(d)] for i in range(d)] for k in range(d)]


def levi_civita(gm: GenMetric) -> Connection:
    """Christoffel symbols 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)."""
    d = gm.chart.dim
    dg = _metric_derivs(gm)
    zero = gm.chart.zero_rf()
    low = [[[(dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) * HALF for j in range(d)] for i in range(d)] for l in range(d)]
    return Connection(gm.chart, _raise(gm, low, zero))


def _raise(gm: GenMetric, low, zero):
    d = gm.chart.dim
    gi = gm.ginv
    table = []
    for k in range(d):
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = zero
                for l in range(d):
                    if not gi[k][l].is_zero() and not low[l][i][j].is_zero():
                        acc = acc + gi[k][l] * low[l][i][j]
                row.append(acc)
            rows.append(row)
        table.append(rows)
    return table


def h_tensor(h: TwistH, chart: Chart):
    d = chart.dim
    return [[[h.H.coeff((i, j, l)) for l in range(d)] for j in range(d)] for i in range(d)]


def bismut(gm: GenMetric, sign: int) -> Connection:
    """nabla +/- 1/2 g^{-1} H, i.e. g(nabla^s_X Y, Z) = g(nabla_X Y, Z) + s/2 H(X, Y, Z)."""
    lc = levi_civita(gm)
    if gm.h.H.is_zero():
        return lc
    d = gm.chart.dim
    H = h_tensor(gm.h, gm.chart)
    low = [[[H[i][j][l] * (HALF * sign) for j in range(d)] for i in range(d)] for l in range(d)]
    extra = _raise(gm, low, gm.chart.zero_rf())
    table = [[[lc.table[k][i][j] + extra[k][i][j] for j in range(d)] for i in range(d)] for k in range(d)]
    return Connection(gm.chart, table)


def tangent_part_of_projection(gm: GenMetric, s: GSection, sign: int) -> VectorField:
    """Tangent part of the V_sign component of s = W + a along V_{-sign}.

    W + a = P + (b+g)P + Q + (b-g)Q gives P = (W + g^{-1}(a - i_W b))/2.
    """
    W, a = s.vec, s.form
    corr = gm.sharp(a - gm.bvec(W))
    return (W + corr * sign) * HALF


def bismut_from_graphs(gm: GenMetric, X: VectorField, Y: VectorField, sign: int) -> VectorField:
    """Tangent part of [X + (b - s g)X, Y + (b + s g)Y]_h projected to V_s."""
    br = courant_bracket(gm.graph(X, -sign), gm.graph(Y, sign), gm.h)
    return tangent_part_of_projection(gm, br, sign)


def riemann_curvature(conn: Connection):
    """R[l][i][j][k] with R(d_i, d_j) d_k = sum_l R[l][i][j][k] d_l."""
    d = conn.chart.dim
    G = conn.table
    zero = conn.chart.zero_rf()
    R = [[[[zero] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for l in range(d):
        for i in range(d):
            for j in range(d):
                if j == i:
                    continue
                for k in range(d):
                    acc = G[l][j][k].partial(i) - G[l][i][k].partial(j)
                    for m in range(d):
                        if not G[m][j][k].is_zero() and not G[l][i][m].is_zero():
                            acc = acc + G[l][i][m] * G[m][j][k]
                        if not G[m][i][k].is_zero() and not G[l][j][m].is_zero():
                            acc = acc - G[l][j][m] * G[m][i][k]
                    R[l][i][j][k] = acc
    return R


def curvature_apply(R, X: VectorField, Y: VectorField, Z: VectorField) -> VectorField:
    d = X.chart.dim
    comps = []
    for l in range(d):
        acc = X.chart.zero_rf()
        for i in range(d):
            if X.comps[i].is_zero():
                continue
            for j in range(d):
                if Y.comps[j].is_zero():
                    continue
                for k in range(d):
                    if Z.comps[k].is_zero() or R[l][i][j][k].is_zero():
                        continue
                    acc = acc + R[l][i][j][k] * X.comps[i] * Y.comps[j] * Z.comps[k]
        comps.append(acc)
    return VectorField(X.chart, comps)


# ---------------------------------------------------------------------------
# jet-based local geometry


@dataclass
class LocalGeometry:
    """Metric data as Taylor jets at one point, with the usual operations.

    ``g`` and ``b`` are jet tensors of shape (d, d, K); ``H`` defaults to db.
    Vector fields are arrays (d, K), 1-forms (d, K), 2-forms (d, d, K).
    """

    js: JetSpace
    g: np.ndarray
    b: np.ndarray | None = None
    H: np.ndarray | None = None

    def __post_init__(self):
        js = self.js
        self.dim = self.g.shape[0]
        if self.b is None:
            self.b = js.zeros((self.dim, self.dim))
        if self.H is None:
            self.H = self.d2(self.b)
        self.ginv = js.matinv(self.g)
        dg = js.grad(self.g)  # dg[k, i, j] = d_k g_ij
        low = 0.5 * (dg + np.transpose(dg, (1, 0, 2, 3)) - np.transpose(dg, (1, 2, 0, 3)))
        # low[i, j, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
        self.gamma_low = low
        self.gamma = js.einsum("kl,ijl->kij", self.ginv, low)
        self.hraise = js.einsum("kl,ijl->kij", self.ginv, self.H)

    # basic operations
    def christoffel(self, sign: int = 0) -> np.ndarray:
        return self.gamma + 0.5 * sign * self.hraise

    def deriv(self, X, T):
        """Directional derivative X(T) of any jet tensor T, componentwise."""
        js = self.js
        grad = js.grad(T)
        Xb = X.reshape((X.shape[0],) + (1,) * (T.ndim - 1) + (X.shape[-1],))
        return js.mul(Xb, grad).sum(axis=0)

    def cov(self, X, Y, sign: int = 0):
        js = self.js
        G = self.christoffel(sign)
        dY = js.grad(Y)  # (i, k, K)
        out = js.einsum("i,ik->k", X, dY)
        return out + js.einsum("kij,ij->k", G, js.einsum("i,j->ij", X, Y))

    def lie(self, X, Y):
        js = self.js
        return js.einsum("i,ik->k", X, js.grad(Y)) - js.einsum("i,ik->k", Y, js.grad(X))

    def inner(self, X, Y):
        js = self.js
        return js.einsum("i,i->", X, js.einsum("ij,j->i", self.g, Y))

    def flat(self, X):
        """g(X, .) as a 1-form."""
        return self.js.einsum("ij,i->j", self.g, X)

    def sharp(self, a):
        return self.js.einsum("kl,l->k", self.ginv, a)

    def bvec(self, X):
        return self.js.einsum("ij,i->j", self.b, X)

    def pair(self, a, X):
        return self.js.einsum("i,i->", a, X)

    def d1(self, a):
        g = self.js.grad(a)  # g[i, j] = d_i a_j
        return g - np.transpose(g, (1, 0, 2))

    def d2(self, w):
        g = self.js.grad(w)  # g[i, j, k] = d_i w_jk
        return g - np.transpose(g, (1, 0, 2, 3)) + np.transpose(g, (1, 2, 0, 3))

    def eval2(self, w, X, Y):
        js = self.js
        return js.einsum("i,i->", X, js.einsum("ij,j->i", w, Y))

    def eval3(self, w, X, Y, Z):
        js = self.js
        return js.einsum("i,i->", X, js.einsum("ijk,jk->i", w, js.einsum("j,k->jk", Y, Z)))

    def wedge11(self, a, c):
        js = self.js
        ac = js.einsum("i,j->ij", a, c)
        return ac - np.transpose(ac, (1, 0, 2))

    def wedge21(self, w, a):
        """(w ^ a)_{ijk} = w_ij a_k - w_ik a_j + w_jk a_i."""
        js = self.js
        t = js.einsum("ij,k->ijk", w, a)
        return t - np.transpose(t, (0, 2, 1, 3)) + np.transpose(t, (2, 0, 1, 3))

    def courant(self, X, xi, Y, eta):
        """Twisted Courant bracket of X + xi and Y + eta (jet arrays)."""
        js = self.js
        vec = self.lie(X, Y)
        deta = js.grad(eta)
        lie_eta = js.einsum("i,ik->k", X, deta) + js.einsum("i,ki->k", eta, js.grad(X))
        dxi = self.d1(xi)
        form = lie_eta - js.einsum("i,ik->k", Y, dxi) + js.einsum("ijk,ij->k", self.H, js.einsum("i,j->ij", X, Y))
        return vec, form

    def graph(self, X, sign: int):
        return X, self.bvec(X) + sign * self.flat(X)

    def bismut_from_graphs(self, X, Y, sign: int):
        vec, form = self.courant(*self.graph(X, -sign), *self.graph(Y, sign))
        return 0.5 * (vec + sign * self.sharp(form - self.bvec(vec)))

    def value(self, a):
        return self.js.value(a)


# ---------------------------------------------------------------------------
# random test data


def _random_linear(chart: Chart, rng: random.Random, scale=Scalar(mpq(1, 10))) -> Poly:
    ring = chart.ring
    p = ring.zero()
    for k in range(chart.dim):
        p = p + ring.var(k) * (Scalar(rng.randint(-3, 3), rng.randint(-3, 3)) * scale)
    return p


def random_metric(chart: Chart, rng: random.Random) -> list:
    """Real symmetric metric: flat plus a small real linear perturbation (Wirtinger components).

    The perturbation is small enough that the metric stays positive on the unit ball.
    """
    d, n = chart.dim, chart.n
    ring = chart.ring
    raw = [[ring.zero() for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            raw[i][j] = raw[j][i] = _random_linear(chart, rng, Scalar(mpq(1, 20 * d)))
    for i in range(n):
        raw[i][n + i] = raw[i][n + i] + ring.one()
        raw[n + i][i] = raw[i][n + i]
    half = Scalar(mpq(1, 2))
    return [[(raw[i][j] + raw[chart.conj_index(i)][chart.conj_index(j)].conj()).scale(half) for j in range(d)]
            for i in range(d)]


def random_real_two_form(chart: Chart, rng: random.Random) -> Form:
    B = Form.zero(chart)
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            B = B + wedge(chart.basis_form(i), chart.basis_form(j)) * _random_linear(chart, rng)
    return B + B.conj()


def random_twist(chart: Chart, rng: random.Random) -> TwistH:
    """Exact (hence closed) real 3-form d B for a random real 2-form B."""
    return TwistH(ext_d(random_real_two_form(chart, rng)))
