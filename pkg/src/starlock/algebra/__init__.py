"""Exact coefficient arithmetic, homogeneous polynomials, univariate
factorization and truncated power series."""

from .linalg import determinant, identity, inverse, nullspace, rank, rref, solve_in_span
from .poly import HPoly, ParseError, monomials, parse_poly, substitute_linear
from .ratio import Ratio, ratio, ratio_str
from .series import TruncSeries, series_nth_root, series_order
from .univariate import (
    BinaryFactorization,
    FieldElement,
    UniFactorization,
    UPoly,
    factor_binary,
    squarefree_decomposition,
    univariate_factor,
    upoly_gcd,
)

__all__ = [
    "BinaryFactorization",
    "FieldElement",
    "HPoly",
    "ParseError",
    "Ratio",
    "TruncSeries",
    "UPoly",
    "UniFactorization",
    "determinant",
    "factor_binary",
    "identity",
    "inverse",
    "monomials",
    "nullspace",
    "parse_poly",
    "rank",
    "ratio",
    "ratio_str",
    "rref",
    "series_nth_root",
    "series_order",
    "solve_in_span",
    "squarefree_decomposition",
    "substitute_linear",
    "univariate_factor",
    "upoly_gcd",
]
