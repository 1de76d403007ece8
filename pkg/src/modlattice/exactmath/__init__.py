"""Exact arithmetic: rationals, quadratic extensions, parameter polynomials, solvers."""
from fractions import Fraction

from .fm import Affine, FMResult, fm_bounds, fm_feasible, replay_farkas
from .linsolve import (
    LinearSystem,
    SolveReport,
    bareiss_echelon,
    nullspace,
    rank,
    rref,
    solve_linear_exact,
)
from .numbers import (
    QuadExt,
    Rational,
    as_fraction,
    floor_sqrt_fraction,
    squarefree_decomposition,
)
from .poly import ParamPoly, RatFunc, poly_gcd

__all__ = [
    "Affine",
    "FMResult",
    "Fraction",
    "LinearSystem",
    "ParamPoly",
    "QuadExt",
    "RatFunc",
    "Rational",
    "SolveReport",
    "as_fraction",
    "bareiss_echelon",
    "floor_sqrt_fraction",
    "fm_bounds",
    "fm_feasible",
    "nullspace",
    "poly_gcd",
    "rank",
    "replay_farkas",
    "rref",
    "solve_linear_exact",
    "squarefree_decomposition",
]
