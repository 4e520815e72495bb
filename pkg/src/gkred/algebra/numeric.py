"""Evaluation of exact expressions at complex sample points."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .poly import Poly
from .ratfunc import RatFunc


class NearPole(ArithmeticError):
    """A denominator is below tolerance at the evaluation point."""


@dataclass(frozen=True)
class NumericPoint:
    """Complex values for z_0..z_{n-1}; the conjugate variables get conj(z)."""

    coords: tuple
    tol: float = 1e-12
    w: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=complex)
        object.__setattr__(self, "coords", tuple(complex(c) for c in z))
        object.__setattr__(self, "w", np.concatenate([z, z.conj()]))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def random_on_sphere(cls, rng: np.random.Generator, n: int, radius: float = 1.0, tol: float = 1e-12):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v *= radius / np.linalg.norm(v)
        return cls(tuple(v), tol)


def evaluate(a, p: NumericPoint) -> complex:
    """Value of a Poly or RatFunc at p; raises NearPole when |den(p)| <= tol."""
    if isinstance(a, Poly):
        if a.ring.n != p.n:
            raise ValueError("point dimension does not match the polynomial ring")
        return a.eval_values(p.w)
    if isinstance(a, RatFunc):
        if a.ring.n != p.n:
            raise ValueError("point dimension does not match the polynomial ring")
        d = a.den.eval_values(p.w)
        if abs(d) <= p.tol:
            raise NearPole(f"denominator {abs(d):.3e} below tolerance {p.tol:.1e}")
        return a.num.eval_values(p.w) / d
    return complex(a)
