"""Run configuration: YAML file plus command-line overrides.

Example (the built-in default)::

    variables: 3
    action:
      generator: ["i*z0", "i*z1", "i*z2", "-i*zb0", "-i*zb1", "-i*zb2"]
      xi: ["0", "0", "0", "0", "0", "0"]
      mu: ["z0*zb0 + z1*zb1 + z2*zb2 - 1"]
      sigma: ["z0*zb0 + z1*zb1 + z2*zb2 - 1"]
    deformation:
      f: ["(z1 - z0)*(z2 - z0)", "(z0 - z1)*(z2 - z1)", "(z0 - z2)*(z1 - z2)"]
      g: ["1", "1", "1"]
      lambda: "1/10"
    seed: 0
    tol: 1.0e-9
    points: 20

Generator components are listed along (d/dz_0.., d/dzb_0..) and xi components
along (dz_0.., dzb_0..).  xi is the form part of the action in the flat
splitting of the deformed structure; the pipeline moves it to the metric
splitting by subtracting i_V b.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import yaml
from gmpy2 import mpq

from .algebra import ParseError, Poly, Scalar, parse_expr, parse_poly
from .calculus import Chart, Form, VectorField


class ConfigError(ValueError):
    """Invalid configuration file or override."""


_SOLUTION_II_F = ["(z1 - z0)*(z2 - z0)", "(z0 - z1)*(z2 - z1)", "(z0 - z2)*(z1 - z2)"]
_SPHERE = "z0*zb0 + z1*zb1 + z2*zb2 - 1"


def parse_scalar(text) -> Scalar:
    """Exact scalar from text such as "1/10", "0.1", "2 + 3i" or a number."""
    if isinstance(text, Scalar):
        return text
    if isinstance(text, int):
        return Scalar(text)
    s = str(text).strip()
    try:
        fr = Fraction(s)
        return Scalar(mpq(fr.numerator, fr.denominator))
    except ValueError:
        pass

    def no_names(name):
        raise KeyError(name)

    try:
        v = parse_expr(s, no_names)
    except ParseError as exc:
        raise ConfigError(f"invalid scalar {s!r}: {exc.message}") from exc
    if not isinstance(v, Scalar):
        raise ConfigError(f"invalid scalar {s!r}")
    return v


@dataclass
class RunConfig:
    variables: int = 3
    generator: list = field(default_factory=lambda: ["i*z0", "i*z1", "i*z2", "-i*zb0", "-i*zb1", "-i*zb2"])
    xi: list = field(default_factory=lambda: ["0"] * 6)
    mu: list = field(default_factory=lambda: [_SPHERE])
    sigma: list = field(default_factory=lambda: [_SPHERE])
    f: list = field(default_factory=lambda: list(_SOLUTION_II_F))
    g: list = field(default_factory=lambda: ["1", "1", "1"])
    lam: str = "1/10"
    seed: int = 0
    tol: float = 1e-9
    points: int = 20
    allow_nonintegrable: bool = False
    path: str | None = None

    def __post_init__(self):
        n = self.variables
        if n < 2:
            raise ConfigError("variables must be at least 2")
        for name, comps, size in (("action.generator", self.generator, 2 * n), ("action.xi", self.xi, 2 * n),
                                  ("deformation.f", self.f, n), ("deformation.g", self.g, n)):
            if len(comps) != size:
                raise ConfigError(f"{name} needs {size} entries, got {len(comps)}")
        if len(self.mu) != 1 or len(self.sigma) != 1:
            raise ConfigError("the pipeline handles a single circle generator with one moment map component")
        if self.points < 1:
            raise ConfigError("points must be positive")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        self.lambda_scalar  # validates

    # -- parsed objects
    @property
    def chart(self) -> Chart:
        return Chart(self.variables)

    def poly(self, text, what: str) -> Poly:
        try:
            return parse_poly(str(text), self.chart.ring)
        except ParseError as exc:
            raise ConfigError(f"{what}: {exc}") from exc

    @property
    def lambda_scalar(self) -> Scalar:
        return parse_scalar(self.lam)

    def generator_field(self) -> VectorField:
        ch = self.chart
        return VectorField(ch, [ch.rf(self.poly(c, "action.generator")) for c in self.generator])

    def xi_form(self) -> Form:
        ch = self.chart
        return Form.from_components(ch, [ch.rf(self.poly(c, "action.xi")) for c in self.xi])

    def mu_poly(self) -> Poly:
        return self.poly(self.mu[0], "action.mu")

    def sigma_poly(self) -> Poly:
        return self.poly(self.sigma[0], "action.sigma")

    def f_polys(self) -> list:
        return [self.poly(c, "deformation.f") for c in self.f]

    def g_polys(self) -> list:
        return [self.poly(c, "deformation.g") for c in self.g]

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


_TOP = {"variables", "action", "deformation", "seed", "tol", "points", "allow_nonintegrable"}
_ACTION = {"generator", "xi", "mu", "sigma"}
_DEFORMATION = {"f", "g", "lambda"}


def _as_list(v, where):
    if isinstance(v, (str, int, float)):
        return [str(v)]
    if not isinstance(v, list):
        raise ConfigError(f"{where} must be a list of expressions")
    return [str(x) for x in v]


def config_from_dict(data: dict, path: str | None = None) -> RunConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(data) - _TOP
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    kw = {"path": path}
    if "variables" in data:
        kw["variables"] = int(data["variables"])
    action = data.get("action") or {}
    deformation = data.get("deformation") or {}
    for sect, allowed, name in ((action, _ACTION, "action"), (deformation, _DEFORMATION, "deformation")):
        if not isinstance(sect, dict):
            raise ConfigError(f"{name} must be a mapping")
        bad = set(sect) - allowed
        if bad:
            raise ConfigError(f"unknown {name} keys: {sorted(bad)}")
    for key in ("generator", "xi", "mu", "sigma"):
        if key in action:
            kw[key] = _as_list(action[key], f"action.{key}")
    if "mu" in action and "sigma" not in action:
        kw["sigma"] = kw["mu"]
    for key in ("f", "g"):
        if key in deformation:
            kw[key] = _as_list(deformation[key], f"deformation.{key}")
    if "lambda" in deformation:
        kw["lam"] = str(deformation["lambda"])
    for key, typ in (("seed", int), ("tol", float), ("points", int), ("allow_nonintegrable", bool)):
        if key in data:
            try:
                kw[key] = typ(data[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: {exc}") from exc
    n = kw.get("variables", 3)
    if n != 3:
        kw.setdefault("generator", [f"i*z{k}" for k in range(n)] + [f"-i*zb{k}" for k in range(n)])
        kw.setdefault("xi", ["0"] * (2 * n))
        sphere = " + ".join(f"z{k}*zb{k}" for k in range(n)) + " - 1"
        kw.setdefault("mu", [sphere])
        kw.setdefault("sigma", kw["mu"])
        kw.setdefault("g", ["1"] * n)
        if "f" not in kw:
            raise ConfigError("deformation.f is required when variables != 3")
    return RunConfig(**kw)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return config_from_dict(data, path)
