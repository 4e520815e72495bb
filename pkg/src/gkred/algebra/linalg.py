"""Exact linear algebra over rational functions via fraction-free elimination."""
from __future__ import annotations

from .poly import Poly, Ring
from .ratfunc import RatFunc


class SingularMatrix(ArithmeticError):
    """The matrix determinant vanishes identically."""


def _common_denominator(row, ring: Ring) -> Poly:
    dens: list[Poly] = []
    for x in row:
        if not x.den.is_const() and all(x.den != d for d in dens):
            dens.append(x.den)
    out = ring.one()
    for d in dens:
        out = out * d
    return out


def _poly_rows(A, ring: Ring, b=None):
    """Clear denominators row by row, returning a polynomial (augmented) matrix."""
    rows = []
    for i, row in enumerate(A):
        full = list(row) + ([b[i]] if b is not None else [])
        full = [RatFunc.coerce(x, ring) for x in full]
        D = _common_denominator(full, ring)
        prow = []
        for x in full:
            if x.den.is_const():
                prow.append(x.num * D)
            else:
                prow.append((x.num * D).exact_div(x.den))
        rows.append(prow)
    return rows


def _ring_of(A, b=None) -> Ring:
    for row in A:
        for x in row:
            if isinstance(x, (RatFunc, Poly)):
                return x.ring
    for x in b or ():
        if isinstance(x, (RatFunc, Poly)):
            return x.ring
    raise ValueError("cannot infer the variable context from constant entries; pass ring=")


def _bareiss_jordan(M: list[list[Poly]], n: int):
    """In-place fraction-free Gauss-Jordan on the first n columns.

    On success every diagonal entry equals +/- det of the (row-permuted)
    coefficient block and the remaining columns are scaled solutions.
    Returns the sign of the row permutation.
    """
    prev = None
    sign = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if not M[r][k].is_zero()), None)
        if piv is None:
            raise SingularMatrix(f"determinant vanishes identically (no pivot in column {k})")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        p = M[k][k]
        rowk = M[k]
        for i in range(len(M)):
            if i == k:
                continue
            rowi = M[i]
            a = rowi[k]
            out = []
            for j, x in enumerate(rowi):
                if j == k:
                    out.append(x.ring.zero())
                    continue
                v = p * x if a.is_zero() else p * x - a * rowk[j]
                out.append(v if prev is None else v.exact_div(prev))
            M[i] = out
        prev = p
    return sign


def ratfunc_solve(A, b, ring: Ring | None = None) -> list[RatFunc]:
    """Solve A x = b exactly; A is square with RatFunc/Poly/scalar entries."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("ratfunc_solve needs a square matrix and matching right-hand side")
    ring = ring or _ring_of(A, b)
    M = _poly_rows(A, ring, b)
    _bareiss_jordan(M, n)
    return [RatFunc(M[i][n], M[i][i]) for i in range(n)]


def ratfunc_solve_many(A, B_cols, ring: Ring | None = None) -> list[list[RatFunc]]:
    """Solve A X = B for several right-hand sides (list of columns)."""
    n = len(A)
    ring = ring or _ring_of(A)
    rows = []
    for i in range(n):
        row = list(A[i]) + [col[i] for col in B_cols]
        rows.append(row)
    M = _poly_rows(rows, ring)
    _bareiss_jordan(M, n)
    return [[RatFunc(M[i][n + c], M[i][i]) for i in range(n)] for c in range(len(B_cols))]


def det(A, ring: Ring | None = None) -> RatFunc:
    """Exact determinant of a square matrix."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    ring = ring or _ring_of(A)
    rows = [[RatFunc.coerce(x, ring) for x in row] for row in A]
    scale = RatFunc(ring.one())
    M = []
    for row in rows:
        D = _common_denominator(row, ring)
        scale = scale * RatFunc(ring.one(), D)
        M.append([(x.num * D).exact_div(x.den) if not x.den.is_const() else x.num * D for x in row])
    try:
        sign = _bareiss_jordan(M, n)
    except SingularMatrix:
        return RatFunc(ring.zero())
    return scale * RatFunc(M[n - 1][n - 1]) * sign


def inverse(A, ring: Ring | None = None) -> list[list[RatFunc]]:
    n = len(A)
    ring = ring or _ring_of(A)
    cols = [[1 if i == c else 0 for i in range(n)] for c in range(n)]
    X = ratfunc_solve_many(A, cols, ring)
    return [[X[c][r] for c in range(n)] for r in range(n)]


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), 0) for j in range(len(B[0]))] for i in range(len(A))]


def matvec(A, x):
    return [sum((A[i][k] * x[k] for k in range(len(x))), 0) for i in range(len(A))]


def scalar_rank(M) -> int:
    """Exact rank of a matrix of Gaussian rationals (Scalar entries)."""
    from .scalar import Scalar

    rows = [[Scalar.coerce(x) for x in row] for row in M]
    if not rows:
        return 0
    ncol = len(rows[0])
    rank = 0
    for c in range(ncol):
        piv = next((r for r in range(rank, len(rows)) if not rows[r][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        for r in range(len(rows)):
            if r != rank and not rows[r][c].is_zero():
                f = rows[r][c] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank
