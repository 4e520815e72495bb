"""Exact Gaussian-rational scalars, polynomials, rational functions and solvers."""
from .linalg import SingularMatrix, det, inverse, ratfunc_solve, ratfunc_solve_many
from .numeric import NearPole, NumericPoint, evaluate
from .parse import ParseError, parse_expr, parse_poly, parse_ratfunc
from .poly import ContextError, NotDivisible, Poly, Ring
from .ratfunc import RatFunc
from .scalar import I, Scalar

__all__ = [
    "ContextError", "I", "NearPole", "NotDivisible", "NumericPoint", "ParseError", "Poly",
    "RatFunc", "Ring", "Scalar", "SingularMatrix", "det", "evaluate", "inverse",
    "parse_expr", "parse_poly", "parse_ratfunc", "ratfunc_solve", "ratfunc_solve_many",
]
