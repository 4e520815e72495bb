"""Reduction by an isotropic trivially extended action with an invariant generalized metric.

Two layers live here.

* Exact layer (RatFunc coefficients on the chart): ``ExtendedAction`` with its
  defining identities, ``ReductionFrames`` with the Gram matrices T, Q, K, the
  connection forms theta_+/- and horizontal lifts, and ``pullback_coform``.
* Jet layer (``LeafReduction``): everything that involves second derivatives or
  restriction to a level set is evaluated at one point from Taylor jets.  The
  ambient space is foliated by the level sets of the constraints; vector fields
  tangent to every leaf, connections P nabla (P the g-orthogonal projection onto
  the leaf) and pulled-back forms then describe the submanifold exactly at the
  chosen point.  Base vector fields are represented by invariant vector fields
  tangent to the leaves, and every reduced quantity is computed upstairs from
  their tau_+, tau_- or tau lifts.

Index conventions for the jet layer: vectors and 1-forms are arrays (d, K),
2-forms (d, d, K), generator-indexed objects carry a leading axis of length m.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Scalar
from .algebra.linalg import inverse
from .calculus import Chart, Form, VectorField, ext_d, interior
from .courant import GSection, TwistH, courant_bracket
from .metric import GenMetric, LocalGeometry


class InvalidAction(ValueError):
    """An extended action violates one of its defining identities."""


class DegenerateGram(ArithmeticError):
    """T, Q or K fails to be invertible."""


# ---------------------------------------------------------------------------
# exact layer


@dataclass
class ExtendedAction:
    chart: Chart
    generators: list                      # [(VectorField, Form of degree 1)]
    structure: np.ndarray | None = None   # f[a, b, c] with [e_a, e_b] = f_ab^c e_c
    mu: list = field(default_factory=list)
    sigma: list = field(default_factory=list)
    h: TwistH | None = None
    validate: bool = True

    def __post_init__(self):
        m = len(self.generators)
        if self.structure is None:
            self.structure = np.zeros((m, m, m), dtype=object)
        if self.validate:
            bad = [k for k, ok in self.checks().items() if not ok]
            if bad:
                raise InvalidAction("extended action fails: " + ", ".join(bad))

    @property
    def m(self) -> int:
        return len(self.generators)

    def V(self, a: int) -> VectorField:
        return self.generators[a][0]

    def xi(self, a: int) -> Form:
        return self.generators[a][1]

    def section(self, a: int) -> GSection:
        return GSection(self.V(a), self.xi(a))

    def checks(self) -> dict:
        m = self.m
        out = {}
        out["isotropy"] = all(
            (interior(self.V(a), self.xi(b)) + interior(self.V(b), self.xi(a))).is_zero()
            for a in range(m) for b in range(m))
        ok = True
        for a in range(m):
            for b in range(m):
                lhs = courant_bracket(self.section(a), self.section(b), self.h)
                rhs = GSection.zero(self.chart)
                for c in range(m):
                    coef = self.structure[a, b, c]
                    if coef:
                        rhs = rhs + self.section(c) * Scalar.coerce(coef)
                ok = ok and lhs == rhs
        out["bracket preserving"] = ok
        if self.h is not None:
            out["i_a H = d xi_a"] = all(
                interior(self.V(a), self.h.H) == ext_d(self.xi(a)) for a in range(m))
        return out


def _gram(vs, ws, gm: GenMetric):
    return [[gm.inner(v, w) for w in ws] for v in vs]


class ReductionFrames:
    """Exact frames for an extended action in the metric splitting of gm."""

    def __init__(self, action: ExtendedAction, gm: GenMetric):
        self.action = action
        self.gm = gm
        ch = action.chart
        m = action.m
        V = [action.V(a) for a in range(m)]
        xs = [gm.sharp(action.xi(a)) for a in range(m)]
        self.Vp = [V[a] + xs[a] for a in range(m)]
        self.Vm = [V[a] - xs[a] for a in range(m)]
        self.Q = _gram(V, V, gm)
        self.T = _gram(self.Vp, self.Vp, gm)
        self.T_minus = _gram(self.Vm, self.Vm, gm)
        self.K = [[self.Q[a][b] - interior(V[b], action.xi(a)).scalar() for b in range(m)] for a in range(m)]
        try:
            self.Tinv = inverse(self.T, ch.ring)
            self.Qinv = inverse(self.Q, ch.ring)
            self.Kinv = inverse(self.K, ch.ring)
        except ArithmeticError as exc:
            raise DegenerateGram(str(exc)) from exc
        self.xi_plus = [gm.gvec(V[a]) + action.xi(a) for a in range(m)]
        self.xi_minus = [gm.gvec(V[a]) - action.xi(a) for a in range(m)]
        # theta_+^a = K^{ba} g(V_b^+), theta_-^a = K^{ab} g(V_b^-) with K Kinv = 1
        self.theta_plus = [sum((self.xi_plus[b] * self.Kinv[b][a] for b in range(m)), Form.zero(ch)) for a in range(m)]
        self.theta_minus = [sum((self.xi_minus[b] * self.Kinv[a][b] for b in range(m)), Form.zero(ch)) for a in range(m)]

    @property
    def chart(self) -> Chart:
        return self.action.chart

    def theta(self, sign: int) -> list:
        return self.theta_plus if sign > 0 else self.theta_minus

    def hor(self, X: VectorField, sign: int) -> VectorField:
        """Horizontal lift of X along tau_+ (sign > 0) or tau_- (sign < 0)."""
        out = X
        for a, th in enumerate(self.theta(sign)):
            out = out - self.action.V(a) * interior(X, th).scalar()
        return out

    def tau_frame(self, sign: int) -> list:
        ch = self.chart
        return [self.hor(ch.basis_vector(k), sign) for k in range(ch.dim)]

    def k_frame(self, sign: int) -> list:
        return self.Vp if sign > 0 else self.Vm

    def in_tau(self, Y: VectorField, sign: int) -> bool:
        """g(Y, V_a) + sign xi_a(Y) = 0 for all a."""
        act = self.action
        return all((self.gm.inner(Y, act.V(a)) + interior(Y, act.xi(a)).scalar() * sign).is_zero()
                   for a in range(act.m))

    def orthogonality(self) -> bool:
        """tau_+/- is g-orthogonal to k_+/-, and T computed with V^+ equals T with V^-."""
        ok = all(self.T[a][b] == self.T_minus[a][b] for a in range(self.action.m) for b in range(self.action.m))
        for sign in (1, -1):
            ok = ok and all(self.gm.inner(Y, v).is_zero() for Y in self.tau_frame(sign) for v in self.k_frame(sign))
        return ok

    def in_KG(self, s: GSection) -> bool:
        """Membership in K^G: g(Y, V_a) + g(eta, xi_a) = 0 and xi_a(Y) + eta(V_a) = 0."""
        act = self.action
        gm = self.gm
        for a in range(act.m):
            c1 = gm.inner(s.vec, act.V(a)) + gm.inner(gm.sharp(s.form), gm.sharp(act.xi(a)))
            c2 = interior(s.vec, act.xi(a)).scalar() + interior(act.V(a), s.form).scalar()
            if not (c1.is_zero() and c2.is_zero()):
                return False
        return True


def pullback_coform(xi: Form, rf: ReductionFrames) -> GSection:
    """[pi]^*(xi) = xi - T^{ab} g(xi, xi_a)(V_b + xi_b) for a basic 1-form xi."""
    act = rf.action
    gm = rf.gm
    for a in range(act.m):
        if not interior(act.V(a), xi).scalar().is_zero():
            raise ValueError("pullback_coform needs a basic 1-form (xi(V_a) = 0)")
    out = GSection.of_form(xi)
    gx = [gm.inner(gm.sharp(xi), gm.sharp(act.xi(a))) for a in range(act.m)]
    for a in range(act.m):
        for b in range(act.m):
            c = rf.Tinv[a][b] * gx[a]
            if not c.is_zero():
                out = out - act.section(b) * c
    return out


# ---------------------------------------------------------------------------
# jet layer


def unitary_field(js, A: np.ndarray) -> np.ndarray:
    """X = sum (A z)_k d/dz_k + conj: tangent to spheres, commutes with scaling by e^{it}."""
    n = A.shape[0]
    z = np.array([js.var(j) for j in range(n)])
    zb = np.array([js.var(n + j) for j in range(n)])
    return np.concatenate([np.einsum("kj,jP->kP", A, z), np.einsum("kj,jP->kP", A.conj(), zb)])


def random_antihermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (M - M.conj().T)


class LeafReduction:
    """Reduction quantities at one point, from jets of (g, b, H), V_a, xi_a and constraints.

    ``geom`` carries the ambient metric and 3-form.  ``V`` has shape (m, d, K),
    ``xi`` (m, d, K); ``constraints`` lists 1-form jets d sigma^alpha (r, d, K)
    cutting out the submanifold (None for the whole space).
    """

    def __init__(self, geom: LocalGeometry, V: np.ndarray, xi: np.ndarray, constraints: np.ndarray | None = None,
                 det_tol: float = 1e-6):
        self.geom = geom
        self.js = js = geom.js
        self.V = V
        self.xi = xi
        self.m = V.shape[0]
        self.dsig = constraints
        if constraints is not None and len(constraints):
            self.normals = np.array([geom.sharp(a) for a in constraints])
            Gup = np.array([[geom.pair(a, nb) for nb in self.normals] for a in constraints])
            self._check(Gup, det_tol, "normal Gram matrix")
            self.Glow = js.matinv(Gup)
        else:
            self.dsig = None
        self.Vp = np.array([V[a] + self.P(geom.sharp(xi[a])) for a in range(self.m)])
        self.Vm = np.array([V[a] - self.P(geom.sharp(xi[a])) for a in range(self.m)])
        self.Q = self._gram(V, V)
        self.T = self._gram(self.Vp, self.Vp)
        self.Km = np.array([[self.Q[a, b] - geom.pair(xi[a], V[b]) for b in range(self.m)] for a in range(self.m)])
        for M, name in ((self.Q, "Q"), (self.T, "T"), (self.Km, "K")):
            self._check(M, det_tol, name)
        self.Qinv = js.matinv(self.Q)
        self.Tinv = js.matinv(self.T)
        self.Kinv = js.matinv(self.Km)
        gV = np.array([geom.flat(v) for v in V])
        self.gV = gV
        self.xi_plus = gV + xi
        self.xi_minus = gV - xi
        self.theta_plus = js.einsum("ba,bi->ai", self.Kinv, self.xi_plus)
        self.theta_minus = js.einsum("ab,bi->ai", self.Kinv, self.xi_minus)
        self.theta_avg = 0.5 * (self.theta_plus + self.theta_minus)

    # -- helpers
    @staticmethod
    def _check(M, tol, name):
        val = np.linalg.det(M[..., 0])
        if abs(val) <= tol:
            raise DegenerateGram(f"{name} is degenerate at the sample point (|det| = {abs(val):.3g})")

    def _gram(self, A, B):
        g = self.geom
        return np.array([[g.inner(a, b) for b in B] for a in A])

    def P(self, X):
        """g-orthogonal projection onto the leaf through each point."""
        if self.dsig is None:
            return X
        js = self.js
        c = np.array([self.geom.pair(a, X) for a in self.dsig])
        coef = js.einsum("ab,b->a", self.Glow, c)
        return X - js.einsum("a,ai->i", coef, self.normals)

    def inner(self, X, Y):
        return self.geom.inner(X, Y)

    def val(self, a):
        return self.js.value(a)

    def cov(self, X, Y, sign: int):
        """Leaf Bismut connection P nabla^sign."""
        return self.P(self.geom.cov(X, Y, sign))

    def combo(self, coef, vecs):
        """sum_a coef[a] vecs[a]."""
        return self.js.einsum("a,ai->i", coef, vecs)

    # -- lifts
    def theta(self, sign: int):
        if sign > 0:
            return self.theta_plus
        if sign < 0:
            return self.theta_minus
        return self.theta_avg

    def lift(self, U, sign: int):
        """tau_+ (sign 1), tau_- (sign -1) or tau (sign 0) lift of the base field U."""
        th = self.js.einsum("ai,i->a", self.theta(sign), U)
        return U - self.combo(th, self.V)

    # -- reduced Bismut connections
    def rho_minus(self, Xp, Ym):
        """tau_- lift of nabla~^-_X Y from X^+ and Y^-."""
        n = self.cov(Xp, Ym, -1)
        c = np.array([self.inner(Ym, self.cov(Xp, self.Vm[b], -1)) for b in range(self.m)])
        return n + self.combo(self.js.einsum("ab,b->a", self.Tinv, c), self.Vm)

    def rho_plus(self, Xm, Yp):
        """tau_+ lift of nabla~^+_X Y from X^- and Y^+."""
        n = self.cov(Xm, Yp, +1)
        c = np.array([self.inner(Yp, self.cov(Xm, self.Vp[b], +1)) for b in range(self.m)])
        return n + self.combo(self.js.einsum("ab,b->a", self.Tinv, c), self.Vp)

    def reduced_bismut(self, X, Y, sign: int):
        if sign < 0:
            return self.rho_minus(self.lift(X, +1), self.lift(Y, -1))
        return self.rho_plus(self.lift(X, -1), self.lift(Y, +1))

    def reduced_metric(self, X, Y, sign: int = 1):
        return self.val(self.inner(self.lift(X, sign), self.lift(Y, sign)))

    # -- curvature of nabla~^-
    def curvature_direct(self, X, Y, Z, W):
        """g~(R~^-(X,Y)Z, W) from the definition applied to the lifted connection."""
        Xp, Yp = self.lift(X, +1), self.lift(Y, +1)
        Zm, Wm = self.lift(Z, -1), self.lift(W, -1)
        a = self.rho_minus(Xp, self.rho_minus(Yp, Zm))
        b = self.rho_minus(Yp, self.rho_minus(Xp, Zm))
        c = self.rho_minus(self.lift(self.geom.lie(Xp, Yp), +1), Zm)
        return self.val(self.inner(a - b - c, Wm))

    def leaf_curvature(self, X, Y, Z, sign: int):
        """R(X,Y)Z of the leaf connection P nabla^sign."""
        lie = self.geom.lie(X, Y)
        return (self.cov(X, self.cov(Y, Z, sign), sign) - self.cov(Y, self.cov(X, Z, sign), sign)
                - self.cov(lie, Z, sign))

    def curvature_closed_form(self, X, Y, Z, W):
        js, g = self.js, self.geom
        Xp, Yp = self.lift(X, +1), self.lift(Y, +1)
        Zm, Wm = self.lift(Z, -1), self.lift(W, -1)
        first = self.inner(self.leaf_curvature(Xp, Yp, Zm, -1), Wm)
        dxp = np.array([g.eval2(g.d1(a), Xp, Yp) for a in self.xi_plus])
        dxm = np.array([g.eval2(g.d1(a), Zm, Wm) for a in self.xi_minus])
        second = -0.5 * js.einsum("b,b->", js.einsum("ba,a->b", self.Kinv, dxm), dxp)

        def c(Aa, Bb):
            return np.array([self.inner(Aa, self.cov(Bb, self.Vm[a], -1)) for a in range(self.m)])

        zy, wx = c(Zm, Yp), c(Wm, Xp)
        zx, wy = c(Zm, Xp), c(Wm, Yp)
        third = (js.einsum("a,a->", zy, js.einsum("ab,b->a", self.Tinv, wx))
                 - js.einsum("a,a->", zx, js.einsum("ab,b->a", self.Tinv, wy)))
        return self.val(first + second + third)

    # -- reduced three-form
    def H_on(self, X, Y, Z):
        return self.geom.eval3(self.geom.H, X, Y, Z)

    def gamma(self):
        """The 2-form gamma whose restriction to tau is eta."""
        js, g = self.js, self.geom
        m = self.m
        th = self.theta_avg
        xiV = np.array([[g.pair(self.xi[b], self.V[a]) for a in range(m)] for b in range(m)])  # xiV[b, a] = xi_b(V_a)
        left = self.xi - js.einsum("bc,ci->bi", xiV, th)             # xi_b - xi_b(V_c) theta^c
        right = self.gV - js.einsum("ad,di->ai", self.Q, th)          # g(V_a) - Q_ad theta^d
        out = js.zeros((g.dim, g.dim))
        for a in range(m):
            for b in range(m):
                out = out - 0.5 * js.mul(self.Qinv[a, b], g.wedge11(left[b], right[a]))
        for a in range(m):
            out = out - g.wedge11(self.xi[a], th[a])
            for b in range(m):
                out = out + 0.5 * js.mul(xiV[b, a], g.wedge11(th[a], th[b]))
        return out

    def eta(self, Y):
        """eta_Y = g(Y^+ - Y) for the tau lift Y; its restriction to TM is the fibre-metric datum."""
        return self.geom.flat(self.lift(Y, +1) - self.lift(Y, 0))

    def H_via_gamma(self, X, Y, Z):
        g = self.geom
        w = g.H + g.d2(self.gamma())
        return self.val(g.eval3(w, self.lift(X, 0), self.lift(Y, 0), self.lift(Z, 0)))

    def omega_plus(self):
        """Omega_+^a = K^{ba} d xi_b^+ (valid on tau_+)."""
        g = self.geom
        d = np.array([g.d1(a) for a in self.xi_plus])
        return self.js.einsum("ba,bij->aij", self.Kinv, d)

    def H_via_omega(self, X, Y, Z):
        g = self.geom
        w = g.H.copy()
        om = self.omega_plus()
        for a in range(self.m):
            w = w + g.wedge21(om[a], self.xi[a])
        return self.val(g.eval3(w, self.lift(X, +1), self.lift(Y, +1), self.lift(Z, +1)))

    def H_via_torsion(self, X, Y, Z):
        Xp, Yp, Zp = self.lift(X, +1), self.lift(Y, +1), self.lift(Z, +1)
        Xm, Ym = self.lift(X, -1), self.lift(Y, -1)
        t = self.rho_plus(Xm, Yp) - self.rho_plus(Ym, Xp) - self.lift(self.geom.lie(Xp, Yp), +1)
        return self.val(self.inner(t, Zp))

    def omega_lemma_residual(self, X, Y):
        """Omega_+(X^+, Y^+) + theta_+([X^+, Y^+]) for each generator."""
        g = self.geom
        Xp, Yp = self.lift(X, +1), self.lift(Y, +1)
        om = self.omega_plus()
        br = g.lie(Xp, Yp)
        return np.array([self.val(g.eval2(om[a], Xp, Yp) + g.pair(self.theta_plus[a], br)) for a in range(self.m)])

    # -- identities of the reduced connections
    def metric_compat(self, X, Y, Z, sign: int):
        """X^s g(Y^-s... ) minus the two connection terms (zero when compatible)."""
        g = self.geom
        if sign < 0:
            Xa, Yb, Zb = self.lift(X, +1), self.lift(Y, -1), self.lift(Z, -1)
            r = self.rho_minus
        else:
            Xa, Yb, Zb = self.lift(X, -1), self.lift(Y, +1), self.lift(Z, +1)
            r = self.rho_plus
        lhs = g.deriv(Xa, self.inner(Yb, Zb))
        return self.val(lhs - self.inner(r(Xa, Yb), Zb) - self.inner(Yb, r(Xa, Zb)))

    def bismut_difference(self, X, Y, Z):
        """g~(nabla~^+_X Y - nabla~^-_X Y, Z), to be compared with H~(X, Y, Z)."""
        p = self.inner(self.reduced_bismut(X, Y, +1), self.lift(Z, +1))
        m = self.inner(self.reduced_bismut(X, Y, -1), self.lift(Z, -1))
        return self.val(p - m)

    def graph_residual(self, Y, Z):
        """g(Y,Z) - Q^{ab} eta_Y(V_b) xi_a(Z) - g~(Y, Z) on tau lifts (reduced V_+ is a graph)."""
        g, js = self.geom, self.js
        Yt, Zt = self.lift(Y, 0), self.lift(Z, 0)
        eY = self.eta(Y)
        ev = np.array([g.pair(eY, v) for v in self.V])
        xz = np.array([g.pair(x, Zt) for x in self.xi])
        corr = js.einsum("a,a->", js.einsum("ab,b->a", self.Qinv, ev), xz)
        return self.val(self.inner(Yt, Zt) - corr - self.inner(self.lift(Y, +1), self.lift(Z, +1)))

    def gamma_restriction_residual(self, Y, Z):
        """gamma(Y, Z) - eta_Y(Z) on tau lifts."""
        g = self.geom
        Yt, Zt = self.lift(Y, 0), self.lift(Z, 0)
        return self.val(g.eval2(self.gamma(), Yt, Zt) - g.pair(self.eta(Y), Zt))

    # -- relative curvature
    def vertical_coefficients(self, R):
        c = np.array([self.inner(R, v) for v in self.V])
        return self.js.einsum("ab,b->a", self.Qinv, c)

    def relative_curvature_vector(self, Xp, Ym):
        return self.rho_minus(Xp, Ym) - self.rho_plus(Ym, Xp) - self.geom.lie(Xp, Ym)

    def relative_curvature_def(self, Xp, Ym):
        """(coefficients R^a, non-vertical residual norm) from the definition."""
        R = self.relative_curvature_vector(Xp, Ym)
        coef = self.vertical_coefficients(R)
        rest = R - self.combo(coef, self.V)
        return self.val(coef), float(np.linalg.norm(self.val(rest)))

    def relative_curvature_formula(self, Xp, Ym):
        """R^a = -2 T^{ab} g(nabla^-_{X^+} Y^-, V_b^-)."""
        n = self.cov(Xp, Ym, -1)
        c = np.array([self.inner(n, self.Vm[b]) for b in range(self.m)])
        return self.val(-2.0 * self.js.einsum("ab,b->a", self.Tinv, c))

    def relative_curvature_ambient(self, Xe, Ye):
        """Ambient form with extensions Xe, Ye and the normal correction term."""
        g, js = self.geom, self.js
        n = g.cov(Xe, Ye, -1)
        Vm_amb = np.array([self.V[a] - g.sharp(self.xi[a]) for a in range(self.m)])
        c = np.array([self.inner(n, v) for v in Vm_amb])
        out = -2.0 * js.einsum("ab,b->a", self.Tinv, c)
        if self.dsig is not None:
            dn = np.array([g.pair(a, n) for a in self.dsig])
            dv = np.array([[g.pair(a, v) for v in Vm_amb] for a in self.dsig])  # dv[alpha, b]
            # s_b = sum_{alpha, beta} G_{alpha beta} dmu^beta(n) dmu^alpha(V_b^-)
            s = js.einsum("a,ab->b", js.einsum("ab,b->a", self.Glow, dn), dv)
            out = out + 2.0 * js.einsum("ab,b->a", self.Tinv, s)
        return self.val(out)

    def holomorphy_residual(self, Xe, Ye):
        """d sigma^alpha(nabla^-_X Y) in the ambient space (tangency of the derivative)."""
        n = self.geom.cov(Xe, Ye, -1)
        return self.val(np.array([self.geom.pair(a, n) for a in self.dsig]))

    # -- submanifold Bismut connection in ambient form
    def submanifold_bismut(self, Xe, Ye, sign: int = -1):
        """nabla^s_X Y + G_{ab}(Y, nabla^s_X d sigma^b) g^{-1} d sigma^a for extensions Xe, Ye."""
        g, js = self.geom, self.js
        n = g.cov(Xe, Ye, sign)
        if self.dsig is None:
            return self.val(n)
        # (nabla_X alpha)(Y) = X(alpha(Y)) - alpha(nabla_X Y)
        t = np.array([g.deriv(Xe, g.pair(a, Ye)) - g.pair(a, n) for a in self.dsig])
        coef = js.einsum("ab,b->a", self.Glow, t)
        return self.val(n + js.einsum("a,ai->i", coef, self.normals))

    def submanifold_curvature_formula(self, X, Y, Z, W, sign: int = -1):
        """g(R(X,Y)Z, W) + G_{ab}[(Z, nabla_Y d sigma^b)(W, nabla_X d sigma^a) - (X <-> Y)]."""
        g, js = self.geom, self.js
        amb = (g.cov(X, g.cov(Y, Z, sign), sign) - g.cov(Y, g.cov(X, Z, sign), sign)
               - g.cov(g.lie(X, Y), Z, sign))
        out = self.inner(amb, W)
        if self.dsig is None:
            return self.val(out)

        def nd(A, B):
            # (B, nabla_A d sigma) = A(d sigma(B)) - d sigma(nabla_A B)
            return np.array([g.deriv(A, g.pair(a, B)) - g.pair(a, g.cov(A, B, sign)) for a in self.dsig])

        zy, wx, zx, wy = nd(Y, Z), nd(X, W), nd(X, Z), nd(Y, W)
        out = out + js.einsum("a,a->", js.einsum("ab,b->a", self.Glow, zy), wx)
        out = out - js.einsum("a,a->", js.einsum("ab,b->a", self.Glow, zx), wy)
        return self.val(out)

    def submanifold_curvature_direct(self, X, Y, Z, W, sign: int = -1):
        return self.val(self.inner(self.leaf_curvature(X, Y, Z, sign), W))


def associated_relative_curvature(R, weights) -> complex:
    """R^a rho_*(e_a) for an abelian action with rho_*(e_a) = sqrt(-1) k_a."""
    R = np.atleast_1d(np.asarray(R))
    weights = np.atleast_1d(np.asarray(weights))
    if R.shape != weights.shape:
        raise ValueError("one weight per generator is required")
    return complex(1j * np.sum(weights * R))
