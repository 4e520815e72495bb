"""End-to-end verification pipeline for the circle action on C^n and its deformations.

The suites build the flat generalized Kahler structure on C^n, deform it by the
bivector eps = 1/2 (sum f_i E_i) ^ (sum g_j F_j), reduce by the scaling circle
action with moment map |z|^2 - r^2, and check every identity of the quotient
construction.  Each suite returns a ``Report``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .algebra import ParseError, Poly, Scalar, parse_expr
from .calculus import Chart
from .config import RunConfig
from .courant import GSection, courant_bracket
from .gk import (
    Deformation, NonIntegrable, appendix_display, appendix_identification, base_fields, bracket_minus,
    bracket_minus_closed_form, complex_structure_preserves_tau, deformed_frames, dmu_contraction,
    extract_bihermitian, frame_bracket_formula, hamiltonian_residuals, holomorphy_at, j_compatible,
    j_squares_to_minus_one, mc_is_zero, mc_residual, minus_part, non_hamiltonian_perturbation, plus_part,
    point_data, proportionality, rotation_field, sphere_moment_map, sphere_points, standard_sections,
    tau01_sections, tau_basis, type_11_residuals, type_locus,
)
from .metric import GenMetric, bismut, bismut_from_graphs, random_metric, random_twist
from .report import Check, Report, exact_check, numeric_check, timed

REF = {
    "mc": "Maurer-Cartan system for the bivector deformation (componentwise equations in f_i, g_i)",
    "mc_solutions": "the two listed solutions of the Maurer-Cartan system",
    "frames": "deformed frames L_+^eps, L_-^eps and their isotropy",
    "extraction": "biHermitian data (g^eps, b^eps, J_+^eps, J_-^eps) underlying the deformed structure",
    "ham": "Hamiltonian condition J_+ V^+ = J_- V^- = -g^{-1} d mu",
    "rc": "relative curvature criterion for generalized holomorphic associated bundles",
    "hrc": "holomorphy criterion d mu(nabla^-_X Y) = 0 on the level set",
    "tau_sections": "sections A_i, B_i spanning the lifts of tau_+^{0,1}, tau_-^{0,1}",
    "appendix": "bracket computations [A_i, B_j]^- for the holomorphy criterion",
    "frame_bracket": "bracket of deformed frame sections conj(E_i) + f_i F and conj(F_j) + C",
    "locus": "type-jumping locus z_0(f_1 - f_2) + z_1(f_2 - f_0) + z_2(f_0 - f_1) = 0",
    "lines": "type jumps on the three lines z_0 = z_1, z_0 = z_2, z_1 = z_2",
    "type11": "curvatures of the quotient connections are of type (1,1): d xi^+(X^+, Y^+) = 0",
    "H_gamma": "reduced 3-form H~ = (H + d gamma)|_tau",
    "H_omega": "reduced 3-form H~ = (H + Omega_+^a ^ xi_a)|_{tau_+}",
    "bismut_reduced": "reduced Bismut connections: nabla~^+ - nabla~^- = g~^{-1} H~ and nabla~^{+/-} g~ = 0",
    "curvature": "closed-form curvature of the reduced Bismut connection",
    "kahler": "undeformed quotient is Kahler (Fubini-Study): H~ = 0 and curvature pair symmetry",
    "relcurv": "relative curvature: definition versus -2 T^{ab} g(nabla^-_{X^+} Y^-, V_b^-)",
    "rce": "relative curvature from ambient data with normal correction",
    "graphs": "graph description of the Bismut connections via the twisted bracket",
    "reduced_graph": "reduced V_+ is the graph of g~ and gamma restricts to the fibre datum eta",
    "omega_lemma": "Omega_+ (X^+, Y^+) = -theta_+([X^+, Y^+]) on tau_+ lifts",
    "submanifold": "Bismut curvature of a level set: Gauss-type formula",
}


class PipelineError(ValueError):
    """The configuration is outside what the pipeline supports."""


# ---------------------------------------------------------------------------
# building blocks


@dataclass
class Setup:
    cfg: RunConfig
    chart: Chart
    deformation: Deformation
    radius: float
    mu: Poly
    sigma: Poly

    def points(self) -> list:
        return [self.radius * z for z in sphere_points(self.cfg.seed, self.cfg.points, self.chart.n)]


def _sphere_radius(chart: Chart, p: Poly, what: str) -> float:
    """r for p = c(|z|^2 - r^2) with c != 0; raises if p is not of this form."""
    ring = chart.ring
    norm2 = sum((chart.z(k) * chart.zb(k) for k in range(chart.n)), ring.zero())
    c = p.coeff(tuple(1 if k in (0, chart.n) else 0 for k in range(chart.dim)))
    if c.is_zero() or not c.is_real():
        raise PipelineError(f"{what} must be a real multiple of |z|^2 plus a constant")
    k = p - norm2.scale(c)
    if not k.is_const():
        raise PipelineError(f"{what} must be a real multiple of |z|^2 plus a constant")
    r2 = -complex(k.const_value() / c)
    if abs(r2.imag) > 0 or r2.real <= 0:
        raise PipelineError(f"{what} must cut out a nonempty sphere")
    return float(np.sqrt(r2.real))


def build_setup(cfg: RunConfig, lam=None) -> Setup:
    ch = cfg.chart
    V = cfg.generator_field()
    rot = rotation_field(ch)
    ratios = {proportionality(V.comps[k].num, rot.comps[k].num) if V.comps[k].den.is_const() else None
              for k in range(ch.dim)}
    if len(ratios) != 1 or None in ratios:
        raise PipelineError("the generator must be the scaling circle action i z d/dz - i zb d/dzb")
    if not next(iter(ratios)) == Scalar(1):
        raise PipelineError("the generator must be normalized as i z d/dz - i zb d/dzb")
    mu, sigma = cfg.mu_poly(), cfg.sigma_poly()
    r = _sphere_radius(ch, mu, "mu")
    if abs(_sphere_radius(ch, sigma, "sigma") - r) > 0:
        raise PipelineError("sigma must cut out the same level set as mu")
    lam = cfg.lambda_scalar if lam is None else Scalar.coerce(lam)
    d = Deformation(ch, cfg.f_polys(), cfg.g_polys(), lam)
    return Setup(cfg, ch, d, r, mu, sigma)


def _frames(setup: Setup):
    """Deformed frames, or None after recording why downstream checks are skipped."""
    cfg = setup.cfg
    res = mc_residual(setup.deformation)
    ok = mc_is_zero(res)
    if not ok and not cfg.allow_nonintegrable:
        return None, "Maurer-Cartan residual is nonzero (pass --allow-nonintegrable to continue)"
    try:
        return deformed_frames(setup.deformation, allow_nonintegrable=cfg.allow_nonintegrable), None
    except NonIntegrable as exc:
        return None, str(exc)


def _skip(report: Report, prefix: str, names: list, reason: str, ref: str):
    for n in names:
        report.add(Check(f"{prefix}{n}", ref, "skip", "exact", "skipped", None, {"reason": reason}))


def _poly_text(p) -> str:
    return "0" if p.is_zero() else str(p)


def _settings(setup: Setup, lam=None) -> dict:
    cfg = setup.cfg
    return {"config": cfg.path or "<default>", "seed": cfg.seed, "points": cfg.points, "tol": cfg.tol,
            "lambda": str(setup.deformation.lam if lam is None else lam),
            "f": [str(p) for p in setup.deformation.f], "g": [str(p) for p in setup.deformation.g]}


def _tolerances(cfg: RunConfig) -> dict:
    """The base tolerance applies to vanishing checks; cross-route checks scale with it."""
    s = cfg.tol / 1e-9
    return {"zero": cfg.tol, "cross": 1e-8 * s, "relative": 1e-7 * s}


def _g_is_one(d: Deformation) -> bool:
    return all(p.is_const() and p.const_value() == Scalar(1) for p in d.g)


def _translation_invariant(d: Deformation) -> bool:
    n = d.chart.n
    return all(sum((p.partial(q) for q in range(n)), d.chart.ring.zero()).is_zero() for p in d.f)


# ---------------------------------------------------------------------------
# appendix suite


def cmd_verify_appendix(cfg: RunConfig, negative_controls: bool = True) -> Report:
    setup = build_setup(cfg)
    report = Report("verify appendix", _settings(setup))
    pre = "appendix: "
    if setup.chart.n != 3:
        raise PipelineError("the appendix computations are stated on C^3")
    df, why = _frames(setup)
    names = [f"[A{i},B{j}]^- d mu contraction" for i in (1, 2) for j in (1, 2)]
    if df is None:
        report.add(exact_check(f"{pre}Maurer-Cartan residual", REF["mc"], False, "nonzero"))
        _skip(report, pre, names, why, REF["appendix"])
        return report
    mu = sphere_moment_map(setup.chart)
    A, B = tau01_sections(df)
    closed_ok = _g_is_one(setup.deformation) and _translation_invariant(setup.deformation)
    for i in (1, 2):
        for j in (1, 2):
            with timed() as t:
                br = bracket_minus(A[i - 1], B[j - 1], df)
                c = dmu_contraction(br, mu)
            report.add(exact_check(f"{pre}[A{i},B{j}]^- d mu contraction", REF["hrc"], c.is_zero(),
                                   "0" if c.is_zero() else str(c), runtime=t.elapsed))
            if closed_ok:
                with timed() as t:
                    diff = br - bracket_minus_closed_form(df, i, j)
                report.add(exact_check(f"{pre}[A{i},B{j}]^- closed form", REF["appendix"], diff.is_zero(),
                                       "0" if diff.is_zero() else str(diff), runtime=t.elapsed))
                if j == 1:
                    with timed() as t:
                        diff = br - appendix_display(df, i)
                    report.add(exact_check(f"{pre}[A{i},B1]^- displayed expression", REF["appendix"],
                                           diff.is_zero(), "0" if diff.is_zero() else str(diff),
                                           runtime=t.elapsed))
    if closed_ok:
        with timed() as t:
            bad = []
            for i in range(3):
                want = frame_bracket_formula(df, i)
                for j in range(3):
                    if not (courant_bracket(df.Lp[i], df.Lm[j]) - want).is_zero():
                        bad.append([i, j])
        report.add(exact_check(f"{pre}frame bracket formula (9 pairs)", REF["frame_bracket"], not bad,
                               "0" if not bad else f"{len(bad)} pairs differ", {"pairs": bad}, t.elapsed))
    else:
        report.add(Check(f"{pre}closed forms", REF["appendix"], "skip", "exact", "skipped", None,
                         {"reason": "closed forms need g_i = 1 and sum_p d_p f_i = 0"}))
    if negative_controls:
        with timed() as t:
            f = list(setup.deformation.f)
            f[1] = f[1] * setup.chart.z(1)
            bad = Deformation(setup.chart, f, setup.deformation.g, setup.deformation.lam)
            dfb = deformed_frames(bad, allow_nonintegrable=True)
            Ab, Bb = tau01_sections(dfb)
            c = dmu_contraction(bracket_minus(Ab[0], Bb[0], dfb), mu)
        report.add(exact_check(f"{pre}negative control: degree-3 f_1 breaks [A1,B1]^- contraction",
                               REF["hrc"], not c.is_zero(), "nonzero" if not c.is_zero() else "0",
                               {"f_1": str(f[1]), "contraction_terms": len(c.num)}, t.elapsed))
    return report


# ---------------------------------------------------------------------------
# reduction suite


class _Worst:
    """Running maximum with the witness that produced it."""

    def __init__(self):
        self.value = 0.0
        self.witness = {}

    def update(self, v, **witness):
        v = float(v)
        if v > self.value or not self.witness:
            self.value = max(v, self.value)
            self.witness = {k: (np.asarray(x).tolist() if hasattr(x, "__len__") else x) for k, x in witness.items()}


def _cplx(z) -> list:
    return [[float(np.real(x)), float(np.imag(x))] for x in np.atleast_1d(z)]


def reduction_residuals(setup: Setup, lam, order: int = 2) -> dict:
    """Maximum residuals of the reduced-structure identities over the sample points."""
    d = setup.deformation.scaled(lam)
    df = deformed_frames(d, allow_nonintegrable=setup.cfg.allow_nonintegrable)
    keys = ["H gamma-omega", "H gamma-torsion", "H bismut difference", "H vanishes", "curvature",
            "kahler symmetry", "compat+", "compat-", "relcurv def-formula", "relcurv formula-ambient",
            "relcurv def-ambient", "relcurv nonvertical", "omega lemma", "reduced graph", "gamma restriction",
            "submanifold curvature"]
    worst = {k: _Worst() for k in keys}
    rng = np.random.default_rng(setup.cfg.seed + 1)
    for idx, z in enumerate(setup.points()):
        pd = point_data(df, z, order=order, mu=setup.mu, sigma=setup.sigma, xi_extra=setup.cfg.xi_form())
        lr = pd.lr
        X, Y, Z, W = base_fields(pd.js, rng, 4, setup.chart.n)
        wit = {"point": _cplx(z), "index": idx}
        hg, ho = lr.H_via_gamma(X, Y, Z), lr.H_via_omega(X, Y, Z)
        ht, hb = lr.H_via_torsion(X, Y, Z), lr.bismut_difference(X, Y, Z)
        worst["H gamma-omega"].update(abs(hg - ho), gamma=_cplx(hg), omega=_cplx(ho), **wit)
        worst["H gamma-torsion"].update(abs(hg - ht), **wit)
        worst["H bismut difference"].update(abs(hg - hb), **wit)
        worst["H vanishes"].update(abs(hg), **wit)
        cd, cc = lr.curvature_direct(X, Y, Z, W), lr.curvature_closed_form(X, Y, Z, W)
        worst["curvature"].update(abs(cd - cc) / max(abs(cd), abs(cc), 1e-12), direct=_cplx(cd),
                                  closed=_cplx(cc), **wit)
        worst["kahler symmetry"].update(abs(cd - lr.curvature_direct(Z, W, X, Y)), **wit)
        worst["compat+"].update(abs(lr.metric_compat(X, Y, Z, +1)), **wit)
        worst["compat-"].update(abs(lr.metric_compat(X, Y, Z, -1)), **wit)
        Xp, Ym = lr.lift(X, +1), lr.lift(Y, -1)
        rd, rest = lr.relative_curvature_def(Xp, Ym)
        rf = lr.relative_curvature_formula(Xp, Ym)
        ra = lr.relative_curvature_ambient(Xp, Ym)
        worst["relcurv def-formula"].update(np.abs(rd - rf).max(), definition=_cplx(rd), formula=_cplx(rf), **wit)
        worst["relcurv formula-ambient"].update(np.abs(rf - ra).max(), ambient=_cplx(ra), **wit)
        worst["relcurv def-ambient"].update(np.abs(rd - ra).max(), **wit)
        worst["relcurv nonvertical"].update(rest, **wit)
        worst["omega lemma"].update(np.abs(lr.omega_lemma_residual(X, Y)).max(), **wit)
        worst["reduced graph"].update(abs(lr.graph_residual(X, Y)), **wit)
        worst["gamma restriction"].update(abs(lr.gamma_restriction_residual(X, Y)), **wit)
        sf = lr.submanifold_curvature_formula(Xp, lr.lift(Y, +1), Ym, lr.lift(Z, -1))
        sd = lr.submanifold_curvature_direct(Xp, lr.lift(Y, +1), Ym, lr.lift(Z, -1))
        worst["submanifold curvature"].update(abs(sf - sd) / max(abs(sd), 1.0), **wit)
    return worst


def cmd_verify_reduction(cfg: RunConfig) -> Report:
    setup = build_setup(cfg)
    report = Report("verify reduction", _settings(setup))
    tol = _tolerances(cfg)
    pre = "reduction: "
    if not mc_is_zero(mc_residual(setup.deformation)) and not cfg.allow_nonintegrable:
        report.add(exact_check(f"{pre}Maurer-Cartan residual", REF["mc"], False, "nonzero"))
        return report
    with timed() as t:
        rng = random.Random(cfg.seed)
        ch2 = Chart(2)
        bad = []
        for trial in range(5):
            gm = GenMetric(ch2, random_metric(ch2, rng), h=random_twist(ch2, rng))
            for s in (1, -1):
                conn = bismut(gm, s)
                for i in range(ch2.dim):
                    for j in range(ch2.dim):
                        X, Y = ch2.basis_vector(i), ch2.basis_vector(j)
                        if bismut_from_graphs(gm, X, Y, s) != conn.covariant(X, Y):
                            bad.append([trial, s, i, j])
    report.add(exact_check(f"{pre}graph Bismut connection equals nabla +/- 1/2 g^-1 H (5 random metrics)",
                           REF["graphs"], not bad, "0" if not bad else f"{len(bad)} entries differ",
                           {"failures": bad}, t.elapsed))
    cases = [("undeformed", Scalar(0)), ("deformed", setup.deformation.lam)]
    for label, lam in cases:
        if label == "deformed" and setup.deformation.is_zero():
            continue
        p = f"{pre}{label}: "
        with timed() as t:
            w = reduction_residuals(setup, lam)
        share = t.elapsed / 14
        wit = lambda k: dict(w[k].witness, **{"lambda": str(lam), "seed": cfg.seed})
        add = lambda name, key, ref, tl: report.add(numeric_check(p + name, REF[ref], w[key].value, tl, wit(key),
                                                                  share))
        add("H~ via gamma vs via Omega", "H gamma-omega", "H_omega", tol["cross"])
        add("H~ via gamma vs torsion of nabla~^+", "H gamma-torsion", "H_gamma", tol["cross"])
        add("nabla~^+ - nabla~^- equals H~", "H bismut difference", "bismut_reduced", tol["zero"])
        add("nabla~^+ metric compatibility", "compat+", "bismut_reduced", tol["zero"])
        add("nabla~^- metric compatibility", "compat-", "bismut_reduced", tol["zero"])
        add("curvature closed form vs direct (relative)", "curvature", "curvature", tol["relative"])
        add("relative curvature definition vs formula", "relcurv def-formula", "relcurv", tol["cross"])
        add("relative curvature formula vs ambient", "relcurv formula-ambient", "rce", tol["cross"])
        add("relative curvature definition vs ambient", "relcurv def-ambient", "rce", tol["cross"])
        add("relative curvature is vertical", "relcurv nonvertical", "relcurv", tol["cross"])
        add("Omega_+ lemma", "omega lemma", "omega_lemma", tol["zero"])
        add("reduced V_+ graph", "reduced graph", "reduced_graph", tol["zero"])
        add("gamma restricts to eta", "gamma restriction", "reduced_graph", tol["zero"])
        add("level-set curvature formula vs direct", "submanifold curvature", "submanifold", tol["cross"])
        if label == "undeformed":
            add("H~ vanishes (Kahler quotient)", "H vanishes", "kahler", tol["zero"])
            add("curvature pair symmetry (Kahler quotient)", "kahler symmetry", "kahler", tol["zero"])
    return report


# ---------------------------------------------------------------------------
# generalized Kahler suite


def _random_mc_deformation(chart: Chart, rng: random.Random, lam) -> Deformation:
    """Random homogeneous quadratic f_i in the differences z_i - z_{i+1}, g_i = 1.

    sum_p d_p kills functions of the differences, so the Maurer-Cartan system holds.
    """
    n = chart.n
    u = [chart.z(k) - chart.z(k + 1) for k in range(n - 1)]
    f = []
    for _ in range(n):
        p = chart.ring.zero()
        for a in range(n - 1):
            for b in range(a, n - 1):
                p = p + u[a] * u[b] * Scalar(rng.randint(-4, 4), rng.randint(-4, 4))
        f.append(p)
    return Deformation(chart, f, [1] * n, lam)


def known_solutions(chart: Chart, lam) -> dict:
    z = [chart.z(k) for k in range(3)]
    return {
        "solution (i)": Deformation(chart, [z[0] * z[0], 0, 0], [0, 0, 1], lam),
        "solution (ii)": Deformation(chart, [(z[1] - z[0]) * (z[2] - z[0]), (z[0] - z[1]) * (z[2] - z[1]),
                                             (z[0] - z[2]) * (z[1] - z[2])], [1, 1, 1], lam),
    }


def three_lines(chart: Chart) -> Poly:
    z = [chart.z(k) for k in range(3)]
    return (z[0] - z[1]) * (z[1] - z[2]) * (z[2] - z[0])


def _mc_text(res: dict) -> str:
    bad = {f"{k}": [_poly_text(a), _poly_text(b)] for k, (a, b) in res.items()
           if not (a.is_zero() and b.is_zero())}
    return "0" if not bad else str(bad)


def cmd_verify_gk(cfg: RunConfig, negative_controls: bool = True) -> Report:
    setup = build_setup(cfg)
    ch = setup.chart
    report = Report("verify gk", _settings(setup))
    tol = _tolerances(cfg)
    pre = "gk: "
    lam = setup.deformation.lam

    # Maurer-Cartan
    with timed() as t:
        res = mc_residual(setup.deformation)
        ok = mc_is_zero(res)
    report.add(exact_check(f"{pre}Maurer-Cartan residual of configured deformation", REF["mc"], ok, _mc_text(res),
                           runtime=t.elapsed))
    if ch.n == 3:
        for name, d in known_solutions(ch, lam).items():
            with timed() as t:
                r = mc_residual(d)
            report.add(exact_check(f"{pre}Maurer-Cartan residual of {name}", REF["mc_solutions"], mc_is_zero(r),
                                   _mc_text(r), runtime=t.elapsed))
        if negative_controls:
            z = [ch.z(k) for k in range(3)]
            with timed() as t:
                r = mc_residual(Deformation(ch, [z[0] * z[0], z[1] * z[1], 0], [1, 1, 1], lam))
            report.add(exact_check(f"{pre}negative control: f = (z0^2, z1^2, 0) violates Maurer-Cartan", REF["mc"],
                                   not mc_is_zero(r), "nonzero" if not mc_is_zero(r) else "0",
                                   {"(0,1)": _poly_text(r[(0, 1)][1])}, t.elapsed))

    downstream = ["deformed frame certificates", "J_+^2 = -1", "J_-^2 = -1", "g compatible with J_+",
                  "g compatible with J_-", "Hamiltonian condition", "holomorphy d mu contractions",
                  "relative curvature on mixed (0,1) pairs", "holomorphy criterion on level set",
                  "A_i, B_j identification", "(1,1) condition", "J_+/- preserve tau_+/-", "type locus"]
    if not ok and not cfg.allow_nonintegrable:
        _skip(report, pre, downstream, "Maurer-Cartan residual is nonzero", REF["mc"])
        return report
    if not ok:
        _skip(report, pre, downstream, "nonintegrable deformation: downstream identities do not apply", REF["mc"])
        return report
    df = deformed_frames(setup.deformation)

    with timed() as t:
        cert = df.certificates()
    report.add(exact_check(f"{pre}deformed frame certificates", REF["frames"], all(cert.values()),
                           "0" if all(cert.values()) else str({k: v for k, v in cert.items() if not v}),
                           runtime=t.elapsed))
    with timed() as t:
        bh = extract_bihermitian(df, cfg.seed)
    t_ext = t.elapsed
    for name, J in (("J_+", bh.Jp), ("J_-", bh.Jm)):
        with timed() as t:
            sq = j_squares_to_minus_one(J)
        report.add(exact_check(f"{pre}{name}^2 = -1", REF["extraction"], sq, "0" if sq else "nonzero",
                               runtime=t.elapsed + t_ext / 2))
    for name, J in (("J_+", bh.Jp), ("J_-", bh.Jm)):
        with timed() as t:
            cmp_ok = j_compatible(J, bh.g)
        report.add(exact_check(f"{pre}g compatible with {name}", REF["extraction"], cmp_ok,
                               "0" if cmp_ok else "nonzero", runtime=t.elapsed))

    pts = setup.points()
    xi_extra = cfg.xi_form()
    rng = np.random.default_rng(cfg.seed + 2)
    ham, ham_neg, ham_zero = _Worst(), _Worst(), _Worst()
    ham_neg.value = np.inf
    rc_mixed, hrc, t11, kcon, t11_neg = _Worst(), _Worst(), _Worst(), _Worst(), _Worst()
    t11_neg.value = np.inf
    mu_bad = setup.mu + ch.z(0) * ch.zb(1)
    pert = non_hamiltonian_perturbation(ch, mpq(1, 10))
    with timed() as t:
        for idx, z in enumerate(pts):
            wit = {"point": _cplx(z), "index": idx}
            pd = point_data(df, z, order=1, mu=setup.mu, sigma=setup.sigma, xi_extra=xi_extra)
            ham.update(max(hamiltonian_residuals(pd)), **wit)
            if negative_controls:
                v = max(hamiltonian_residuals(pd, mu_bad))
                if v < ham_neg.value:
                    ham_neg.value, ham_neg.witness = v, wit
            U = base_fields(pd.js, rng, 2, ch.n)
            for r in holomorphy_at(pd, tau_basis(pd, +1, "01", U), tau_basis(pd, -1, "01", U)):
                rc_mixed.update(max(r.R_formula, r.R_definition, r.R_ambient), **wit)
                hrc.update(r.hrc, **wit)
            U4 = base_fields(pd.js, rng, 4, ch.n)
            t11.update(max(type_11_residuals(pd, U4)), **wit)
            kcon.update(complex_structure_preserves_tau(pd, U4), **wit)
            if negative_controls:
                pdn = point_data(df, z, order=1, mu=setup.mu, sigma=setup.sigma, xi_extra=xi_extra + pert)
                v = min(type_11_residuals(pdn, U4))
                if v < t11_neg.value:
                    t11_neg.value, t11_neg.witness = v, wit
                if not setup.deformation.is_zero():
                    pdz = point_data(df, z, order=1, mu=setup.mu, sigma=setup.sigma, xi_mode="zero",
                                     xi_extra=xi_extra)
                    ham_zero.update(max(hamiltonian_residuals(pdz)), **wit)
    share = t.elapsed / 6
    num = lambda key_w: dict(key_w.witness, seed=cfg.seed, **{"lambda": str(lam)})
    report.add(numeric_check(f"{pre}Hamiltonian condition (xi = -i_V b)", REF["ham"], ham.value, tol["zero"],
                             num(ham), share))
    if negative_controls:
        report.add(numeric_check(f"{pre}negative control: perturbed moment map mu + z0 zb1", REF["ham"],
                                 ham_neg.value, 1e-3, num(ham_neg), share, above=True))
        if not setup.deformation.is_zero():
            report.add(numeric_check(f"{pre}xi = 0 fails the Hamiltonian condition when deformed", REF["ham"],
                                     ham_zero.value, 1e-3, num(ham_zero), share, above=True))
    report.add(numeric_check(f"{pre}relative curvature on mixed (0,1) pairs", REF["rc"], rc_mixed.value,
                             tol["zero"], num(rc_mixed), share))
    report.add(numeric_check(f"{pre}holomorphy criterion on level set", REF["hrc"], hrc.value, tol["zero"],
                             num(hrc), share))
    report.add(numeric_check(f"{pre}(1,1) condition for d xi^+/-", REF["type11"], t11.value, tol["zero"],
                             num(t11), share))
    report.add(numeric_check(f"{pre}J_+/- preserve tau_+/-", REF["type11"], kcon.value, tol["zero"], num(kcon),
                             share))
    if negative_controls:
        report.add(numeric_check(f"{pre}negative control: non-Hamiltonian xi perturbation breaks (1,1)",
                                 REF["type11"], t11_neg.value, 1e-3, num(t11_neg), share, above=True))

    if ch.n == 3:
        with timed() as t:
            ident = appendix_identification(df, pts[0])
        report.add(numeric_check(f"{pre}A_i, B_j identification (V_+/-, tau^(0,1), bracket = nabla^-)",
                                 REF["tau_sections"], max(ident.values()), tol["zero"],
                                 {"residuals": ident, "point": _cplx(pts[0]), "seed": cfg.seed,
                                  "lambda": str(setup.deformation.lam)}, t.elapsed))
        with timed() as t:
            mu = sphere_moment_map(ch)
            A, B = tau01_sections(df)
            nz = [[i + 1, j + 1] for i in range(2) for j in range(2)
                  if not dmu_contraction(bracket_minus(A[i], B[j], df), mu).is_zero()]
        report.add(exact_check(f"{pre}holomorphy d mu contractions of [A_i,B_j]^- on C^3", REF["hrc"], not nz,
                               "0" if not nz else f"nonzero for {nz}", {"pairs": nz}, t.elapsed))
        _type_locus_checks(report, pre, setup, negative_controls)
    return report


def _type_locus_checks(report: Report, pre: str, setup: Setup, negative_controls: bool):
    ch = setup.chart
    lam = setup.deformation.lam
    with timed() as t:
        tl = type_locus(setup.deformation)
    ok = tl.ratio_triple is not None
    report.add(exact_check(f"{pre}type locus of configured deformation matches det[f; g; z]", REF["locus"], ok,
                           f"ratio {tl.ratio_triple}" if ok else "not proportional",
                           {"rho": str(tl.rho)}, t.elapsed))
    sols = known_solutions(ch, lam)
    with timed() as t:
        tl2 = type_locus(sols["solution (ii)"])
        q = None
        try:
            q = tl2.rho.exact_div(three_lines(ch))
        except ArithmeticError:
            pass
        ok = q is not None and q.is_const() and not q.is_zero()
    report.add(exact_check(f"{pre}solution (ii) locus is the three lines", REF["lines"], ok,
                           f"quotient {q}" if q is not None else "not divisible", {"rho": str(tl2.rho)}, t.elapsed))
    with timed() as t:
        tl1 = type_locus(sols["solution (i)"])
    ok = tl1.ratio_triple is not None
    report.add(exact_check(f"{pre}solution (i) locus matches det[f; g; z]", REF["locus"], ok,
                           f"ratio {tl1.ratio_triple}" if ok else "not proportional", {"rho": str(tl1.rho)},
                           t.elapsed))
    with timed() as t:
        rng = random.Random(setup.cfg.seed)
        bad = []
        for k in range(3):
            d = _random_mc_deformation(ch, rng, lam)
            tlk = type_locus(d)
            if not mc_is_zero(mc_residual(d)) or tlk.ratio_displayed is None:
                bad.append([str(p) for p in d.f])
    report.add(exact_check(f"{pre}displayed cubic matches spinor locus for 3 random deformations", REF["locus"],
                           not bad, "0" if not bad else f"{len(bad)} mismatches", {"failures": bad}, t.elapsed))
    if negative_controls:
        with timed() as t:
            d0 = Deformation(ch, [0] * 3, [1] * 3, lam)
            tl0 = type_locus(d0)
        report.add(exact_check(f"{pre}undeformed structure has no type-jumping locus", REF["locus"],
                               not tl0.has_locus, str(tl0.rho), runtime=t.elapsed))


# ---------------------------------------------------------------------------
# all suites, brackets and the type locus


def cmd_verify_all(cfg: RunConfig) -> Report:
    report = Report("verify all")
    for r in (cmd_verify_appendix(cfg), cmd_verify_reduction(cfg), cmd_verify_gk(cfg)):
        if not report.settings:
            report.settings = r.settings
        report.extend(r)
    return report


BRACKET_GRAMMAR = """\
Section expressions are sums of terms built with + - * / ^ and parentheses.
Names:
  z0, zb0, ...            coordinates (polynomial coefficients)
  E0, F0, Eb0, Fb0, ...   E_i = d/dz_i + dzb_i, F_i = d/dz_i - dzb_i and their conjugates
  Lp0, Lm0, Lpb0, Lmb0    deformed frames conj(E_i) + f_i G, conj(F_i) + g_i C and conjugates
  A1, B1, ...             the tau^(0,1) sections A_k, B_k (k >= 1)
  pz0, pzb0, dz0, dzb0    coordinate vector fields and 1-forms as sections
Example: (z1 - z0)*Eb0 + 2*Fb1"""


class SectionNames:
    """Resolver for the section mini-language; deformed data are built on first use."""

    def __init__(self, setup: Setup):
        self.setup = setup
        self.chart = setup.chart
        self._df = None

    @property
    def df(self):
        if self._df is None:
            self._df = deformed_frames(self.setup.deformation,
                                       allow_nonintegrable=self.setup.cfg.allow_nonintegrable)
        return self._df

    def __call__(self, name: str):
        ch = self.chart
        m = re.fullmatch(r"(zb|z|Eb|E|Fb|F|Lpb|Lp|Lmb|Lm|A|B|pzb|pz|dzb|dz)(\d+)", name)
        if not m:
            raise KeyError(name)
        kind, k = m.group(1), int(m.group(2))
        if k >= ch.n:
            raise KeyError(name)
        zero_form = ch.dz(0) * 0
        if kind == "z":
            return ch.z(k)
        if kind == "zb":
            return ch.zb(k)
        if kind in ("E", "F", "Eb", "Fb"):
            E, F, Eb, Fb = standard_sections(ch)
            return {"E": E, "F": F, "Eb": Eb, "Fb": Fb}[kind][k]
        if kind in ("Lp", "Lm", "Lpb", "Lmb"):
            df = self.df
            return {"Lp": df.Lp, "Lm": df.Lm, "Lpb": df.Lp_bar, "Lmb": df.Lm_bar}[kind][k]
        if kind in ("A", "B"):
            if k == 0:
                raise KeyError(name)
            A, B = tau01_sections(self.df)
            return (A if kind == "A" else B)[k - 1]
        if kind == "pz":
            return GSection(ch.pz(k), zero_form)
        if kind == "pzb":
            return GSection(ch.pzb(k), zero_form)
        if kind == "dz":
            return GSection(ch.zero_vector(), ch.dz(k))
        return GSection(ch.zero_vector(), ch.dzb(k))


def parse_section(text: str, names: SectionNames) -> GSection:
    v = parse_expr(text, names)
    if not isinstance(v, GSection):
        raise ParseError(text, 0, "expression is not a section (no frame name appears)")
    return v


def cmd_bracket(cfg: RunConfig, lhs: str, rhs: str, project: bool = False) -> dict:
    """Exact bracket [lhs, rhs] (H = 0 splitting), optionally with its V_+/V_- parts."""
    setup = build_setup(cfg)
    names = SectionNames(setup)
    a, b = parse_section(lhs, names), parse_section(rhs, names)
    br = courant_bracket(a, b)
    out = {"lhs": str(a), "rhs": str(b), "bracket": str(br)}
    if project:
        out["V+ part"] = str(plus_part(br, names.df))
        out["V- part"] = str(minus_part(br, names.df))
    return out


def cmd_type_locus(cfg: RunConfig) -> dict:
    setup = build_setup(cfg)
    tl = type_locus(setup.deformation)
    out = {"rho": str(tl.rho), "has_locus": tl.has_locus, "triple_product": str(tl.triple),
           "ratio_to_triple_product": None if tl.ratio_triple is None else str(tl.ratio_triple)}
    if tl.displayed is not None:
        out["displayed_cubic"] = str(tl.displayed)
        out["ratio_to_displayed_cubic"] = None if tl.ratio_displayed is None else str(tl.ratio_displayed)
    if setup.chart.n == 3 and tl.has_locus:
        try:
            q = tl.rho.exact_div(three_lines(setup.chart))
            out["divided_by_three_lines"] = str(q)
        except ArithmeticError:
            out["divided_by_three_lines"] = None
    return out
