"""Exact special values of generalized multiple Hurwitz zeta functions at s = -N."""

from .arith import bernoulli_number, bernoulli_polynomial, binomial, gen_binomial
from .evaluators import (
    EvalReport,
    PoleError,
    mzv_nonpositive,
    y_shifted_poly,
    y_value,
    zeta_direct,
    zeta_hurwitz_special,
    zeta_shifted,
    zeta_value,
)
from .indexsets import AlphaVec, Variant, coefficient_A, denominator_factors, enumerate_T, is_polar
from .oracles import Tolerance, oracle_zeta
from .polycube import MultiPoly, bernoullize, cube_integrate_shifted

__version__ = "0.1.0"
