"""Truncated multivariate Taylor expansions ("jets") around a sample point.

A jet stores the Taylor coefficients c_a of f(w0 + h) = sum_a c_a h^a for all
multi-indices |a| <= order.  Arrays of jets are numpy arrays whose last axis
runs over the monomials, so tensors of functions (metrics, Christoffel symbols,
vector fields) are handled in one vectorized call.  Differentiation lowers the
order by one; products are truncated.  The value at the point is coefficient 0.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .poly import Poly
from .ratfunc import RatFunc


@lru_cache(maxsize=8)
def _tables(nvars: int, order: int):
    monos = []
    for d in range(order + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            monos.append(tuple(e))
    index = {m: k for k, m in enumerate(monos)}
    degs = np.array([sum(m) for m in monos])
    I, J, K = [], [], []
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            if degs[i] + degs[j] <= order:
                I.append(i)
                J.append(j)
                K.append(index[tuple(x + y for x, y in zip(a, b))])
    S = np.zeros((len(I), len(monos)))
    S[np.arange(len(I)), K] = 1.0
    dsrc, dfac = [], []
    for v in range(nvars):
        src = np.zeros(len(monos), dtype=np.int64)
        fac = np.zeros(len(monos))
        for k, m in enumerate(monos):
            up = list(m)
            up[v] += 1
            up = tuple(up)
            if up in index:
                src[k] = index[up]
                fac[k] = up[v]
        dsrc.append(src)
        dfac.append(fac)
    return monos, index, degs, np.array(I), np.array(J), S, np.array(dsrc), np.array(dfac)


class JetSpace:
    """Jets of a fixed order in nvars variables around the point w0."""

    def __init__(self, w0, order: int):
        self.w0 = np.asarray(w0, dtype=complex)
        self.nvars = len(self.w0)
        self.order = order
        (self.monos, self.index, self.degs, self.I, self.J, self.S,
         self.dsrc, self.dfac) = _tables(self.nvars, order)
        self.K = len(self.monos)
        self._mono_arr = np.array(self.monos, dtype=np.int64)

    # construction
    def const(self, c, shape=()) -> np.ndarray:
        out = np.zeros(tuple(shape) + (self.K,), dtype=complex)
        out[..., 0] = c
        return out

    def zeros(self, shape=()) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.K,), dtype=complex)

    def var(self, v: int) -> np.ndarray:
        out = self.const(self.w0[v])
        out[self.index[tuple(1 if k == v else 0 for k in range(self.nvars))]] = 1.0
        return out

    def from_poly(self, p: Poly) -> np.ndarray:
        """Exact Taylor coefficients of a polynomial (rounded to complex128)."""
        exps, coef = p.arrays()
        out = np.zeros(self.K, dtype=complex)
        if not len(coef):
            return out
        # coefficient of h^a in prod_v (w0_v + h_v)^{e_v} is prod_v C(e_v, a_v) w0_v^{e_v - a_v}
        E = exps[:, None, :]
        A = self._mono_arr[None, :, :]
        ok = np.all(E >= A, axis=2)
        diff = np.where(E >= A, E - A, 0)
        binom = _binom(E, A)
        powers = np.prod(np.where(E >= A, binom * self.w0[None, None, :] ** diff, 0), axis=2)
        out = np.sum(coef[:, None] * np.where(ok, powers, 0), axis=0)
        return out

    def from_exact(self, a) -> np.ndarray:
        if isinstance(a, Poly):
            return self.from_poly(a)
        if isinstance(a, RatFunc):
            if a.den.is_const():
                return self.from_poly(a.num) / complex(a.den.const_value())
            return self.mul(self.from_poly(a.num), self.inv(self.from_poly(a.den)))
        return self.const(complex(a))

    def from_exact_array(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=object)
        out = self.zeros(arr.shape)
        for idx in np.ndindex(arr.shape):
            out[idx] = self.from_exact(arr[idx])
        return out

    # algebra
    def mul(self, a, b) -> np.ndarray:
        """Elementwise (broadcast) product of jet arrays."""
        return (a[..., self.I] * b[..., self.J]) @ self.S

    def einsum(self, spec: str, a, b) -> np.ndarray:
        """Two-operand einsum over the tensor indices with jet multiplication."""
        lhs, out = spec.split("->")
        sa, sb = lhs.split(",")
        prod = np.einsum(f"{sa}P,{sb}P->{out}P", a[..., self.I], b[..., self.J], optimize=True)
        return prod @ self.S

    def inv(self, a) -> np.ndarray:
        """Reciprocal of a jet array with nonzero constant terms."""
        a0 = a[..., 0]
        if np.any(np.abs(a0) == 0):
            raise ZeroDivisionError("jet with vanishing value cannot be inverted")
        r0 = 1.0 / a0
        n = a.copy()
        n[..., 0] = 0
        t = -n * r0[..., None]
        out = self.const(1.0, a.shape[:-1])
        term = out
        for _ in range(self.order):
            term = self.mul(term, t)
            out = out + term
        return out * r0[..., None]

    def matinv(self, A) -> np.ndarray:
        """Inverse of a square matrix of jets, shape (n, n, K)."""
        A0 = A[..., 0]
        A0inv = np.linalg.inv(A0)
        N = A.copy()
        N[..., 0] = 0
        M = -np.einsum("ij,jkP->ikP", A0inv, N)
        out = self.const(1.0, A0.shape) * 0
        out[..., 0] = np.eye(A0.shape[0])
        term = out.copy()
        for _ in range(self.order):
            term = self.einsum("ij,jk->ik", term, M)
            out = out + term
        return np.einsum("ijP,jk->ikP", out, A0inv)

    def d(self, a, v: int) -> np.ndarray:
        """Partial derivative along variable v (valid order drops by one)."""
        return a[..., self.dsrc[v]] * self.dfac[v]

    def grad(self, a) -> np.ndarray:
        """All partial derivatives; new leading axis indexes the variable."""
        return np.stack([self.d(a, v) for v in range(self.nvars)], axis=0)

    def value(self, a) -> np.ndarray:
        return a[..., 0]

    def truncate(self, a, order: int) -> np.ndarray:
        out = a.copy()
        out[..., self.degs > order] = 0
        return out


def _binom(E, A):
    from scipy.special import comb

    return comb(E, A, exact=False)
