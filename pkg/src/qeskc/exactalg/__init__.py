"""Exact arithmetic: rationals, sparse multivariate polynomials, rational functions."""

from .factor import factor_shifted_quadratics
from .gcd import heu_gcd, poly_gcd, prs_gcd
from .linsolve import SingularSystem, residual, solve_linear_exact
from .poly import MultiPoly, NotDivisible, Rational, monomial_str, parse_monomial, symbol_index
from .ratfunc import RatFunc, rat_sum

q = RatFunc.var("q")
k = RatFunc.var("k")
L = RatFunc.var("L")

__all__ = [
    "MultiPoly",
    "NotDivisible",
    "RatFunc",
    "Rational",
    "SingularSystem",
    "factor_shifted_quadratics",
    "heu_gcd",
    "k",
    "L",
    "monomial_str",
    "parse_monomial",
    "poly_gcd",
    "prs_gcd",
    "q",
    "rat_sum",
    "residual",
    "solve_linear_exact",
    "symbol_index",
]
