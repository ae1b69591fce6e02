"""Values at s = -N of the integral Y_n, its shifted polynomial, and zeta_n.

All results are exact.  ``zeta_value`` goes through the polynomial pipeline
(``bernoullize`` of the shifted Y-polynomial, evaluated at a = 0); the direct
double sum over ``(k, v)`` is kept as an independent audit path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .arith import bernoulli_number, format_rational
from .indexsets import (
    AlphaVec,
    KVector,
    MultiIndex,
    PreconditionError,
    Variant,
    as_multi_index,
    coefficient_A,
    denominator_factors,
    is_polar,
    iter_kv,
    iter_T,
    term_count,
)
from .polycube import MultiPoly, bernoullize, eval_poly

__all__ = [
    "EvalReport",
    "PoleError",
    "y_value",
    "y_shifted_poly",
    "zeta_value",
    "zeta_direct",
    "zeta_polynomial",
    "zeta_shifted",
    "zeta_hurwitz_special",
    "mzv_nonpositive",
]


class PoleError(ArithmeticError):
    """Raised when a polynomial is requested at a polar point."""

    def __init__(self, N, witness):
        super().__init__(f"-N = -{tuple(N)} is a polar divisor (witness k={witness})")
        self.N = tuple(N)
        self.witness = witness


@dataclass(frozen=True)
class EvalReport:
    n: int
    alpha: AlphaVec
    N: MultiIndex
    variant: Variant
    value: Fraction | None
    polar: bool
    witness: KVector | None
    term_count: int

    def __post_init__(self):
        if (self.value is None) != self.polar:
            raise ValueError("value must be present exactly when the point is not polar")

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "alpha": [format_rational(a) for a in self.alpha.alphas],
            "N": list(self.N),
            "variant": self.variant.value,
            "polar": self.polar,
            "value": None if self.value is None else format_rational(self.value),
            "term_count": self.term_count,
        }
        if self.polar:
            out["witness"] = list(self.witness)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _prepare(alpha, N, variant):
    N = as_multi_index(N)
    alpha = AlphaVec.of(alpha)
    if len(alpha) != len(N):
        raise PreconditionError(f"alpha has {len(alpha)} entries but N has {len(N)}")
    return alpha, N, Variant.parse(variant)


def _polar_report(alpha, N, variant, witness) -> EvalReport:
    return EvalReport(len(N), alpha, N, variant, None, True, witness, 0)


def _bases(alpha: AlphaVec, variant: Variant) -> tuple[Fraction, ...]:
    return alpha.deltas if variant is Variant.CORRECTED else alpha.alphas[1:]


def y_value(alpha, N: Sequence[int], variant=Variant.CORRECTED) -> EvalReport:
    alpha, N, variant = _prepare(alpha, N, variant)
    polar, witness = is_polar(N)
    if polar:
        return _polar_report(alpha, N, variant, witness)
    n = len(N)
    bases = _bases(alpha, variant)
    total = Fraction(0)
    count = 0
    for k in iter_T(N):
        d = denominator_factors(N, k)
        if 0 in d:
            raise AssertionError(f"zero denominator at k={k} outside a detected pole")
        num = alpha[0] ** d[0]
        den = 1
        for j in range(2, n + 1):
            kj = k[j - 2]
            num *= comb(d[j - 1], kj) * (bases[j - 2] ** kj if kj else 1)
        for dj in d:
            den *= dj
        total += num / den
        count += 1
    return EvalReport(n, alpha, N, variant, (-1) ** n * total, False, None, count)


def y_shifted_poly(alpha, N: Sequence[int], variant=Variant.CORRECTED) -> MultiPoly:
    """The shifted integral as a polynomial in a_1..a_n.

    Corrected: each k-term of the Y-value with ``alpha_1 -> alpha_1 + a_1`` and
    ``delta_j -> delta_j + a_j``, expanded.  Paper: the (k, v) double
    sum taken literally.
    """
    alpha, N, variant = _prepare(alpha, N, variant)
    polar, witness = is_polar(N)
    if polar:
        raise PoleError(N, witness)
    n = len(N)
    if variant is Variant.PAPER:
        return _paper_shifted_poly(alpha, N)

    centers = (alpha[0],) + alpha.deltas
    # ascending coefficients of (center_i + a_i)^e, reused across k
    binom_cache: dict[tuple[int, int], list[Fraction]] = {}

    def expansion(i: int, e: int) -> list[Fraction]:
        key = (i, e)
        if key not in binom_cache:
            c = centers[i]
            binom_cache[key] = [comb(e, r) * c ** (e - r) for r in range(e + 1)]
        return binom_cache[key]

    acc: dict[tuple[int, ...], Fraction] = {}
    for k in iter_T(N):
        d = denominator_factors(N, k)
        coeff = Fraction((-1) ** n)
        for dj in d:
            coeff /= dj
        for j in range(2, n + 1):
            coeff *= comb(d[j - 1], k[j - 2])
        # product of polynomials in distinct variables: an outer product
        partial: dict[tuple[int, ...], Fraction] = {(): coeff}
        for i, e in enumerate((d[0],) + tuple(k)):
            factor = expansion(i, e)
            partial = {
                exp + (r,): v * w for exp, v in partial.items() for r, w in enumerate(factor) if w
            }
        for exp, v in partial.items():
            acc[exp] = acc.get(exp, 0) + v
    return MultiPoly(n, acc)


def _paper_shifted_poly(alpha: AlphaVec, N: MultiIndex) -> MultiPoly:
    n = len(N)
    terms: dict[tuple[int, ...], Fraction] = {}
    for k, v, d in iter_kv(N):
        den = 1
        for dj in d:
            den *= dj
        c = coefficient_A(N, k, v, alpha, Variant.PAPER) / den
        terms[v] = terms.get(v, 0) + c
    return MultiPoly(n, terms).scale((-1) ** n)


def zeta_polynomial(alpha, N: Sequence[int], variant=Variant.CORRECTED) -> MultiPoly:
    """Q(a) = bernoullize(Y-polynomial); its value at a is the shifted zeta."""
    return bernoullize(y_shifted_poly(alpha, N, variant))


def zeta_direct(alpha, N: Sequence[int], variant=Variant.CORRECTED) -> EvalReport:
    """Audit path: the (k, v) double sum of coefficient_A times Bernoulli products."""
    alpha, N, variant = _prepare(alpha, N, variant)
    polar, witness = is_polar(N)
    if polar:
        return _polar_report(alpha, N, variant, witness)
    n = len(N)
    total = Fraction(0)
    count = 0
    for k, v, d in iter_kv(N):
        count += 1
        bprod = Fraction(1)
        for vj in v:
            bprod *= bernoulli_number(vj)
            if not bprod:
                break
        if not bprod:
            continue
        den = 1
        for dj in d:
            den *= dj
        total += coefficient_A(N, k, v, alpha, variant) * bprod / den
    return EvalReport(n, alpha, N, variant, (-1) ** n * total, False, None, count)


def zeta_value(alpha, N: Sequence[int], variant=Variant.CORRECTED) -> EvalReport:
    alpha, N, variant = _prepare(alpha, N, variant)
    polar, witness = is_polar(N)
    if polar:
        return _polar_report(alpha, N, variant, witness)
    n = len(N)
    # Q(0) only needs B_e(0) = B_e per monomial, not the full bernoullized polynomial
    value = Fraction(0)
    for exps, c in y_shifted_poly(alpha, N, variant).terms.items():
        for e in exps:
            c *= bernoulli_number(e)
            if not c:
                break
        value += c
    return EvalReport(n, alpha, N, variant, value, False, None, term_count(N))


def zeta_shifted(alpha, N: Sequence[int], a: Sequence, variant=Variant.CORRECTED) -> Fraction:
    alpha, N, variant = _prepare(alpha, N, variant)
    if len(a) != len(N):
        raise PreconditionError(f"a has {len(a)} entries, expected {len(N)}")
    return eval_poly(zeta_polynomial(alpha, N, variant), a)


def zeta_hurwitz_special(alpha_scalar, N: Sequence[int], variant=Variant.CORRECTED) -> EvalReport:
    """Equal shifts: the classical multiple Hurwitz zeta at -N."""
    N = as_multi_index(N)
    alpha_scalar = Fraction(alpha_scalar)
    if alpha_scalar <= 0:
        raise PreconditionError("alpha must be positive")
    variant = Variant.parse(variant)
    alpha = AlphaVec.broadcast(alpha_scalar, len(N))
    polar, witness = is_polar(N)
    if polar:
        return _polar_report(alpha, N, variant, witness)
    if variant is not Variant.CORRECTED:
        return zeta_direct(alpha, N, variant)
    # all increments vanish, so only v_j = k_j (j >= 2) survive
    n = len(N)
    total = Fraction(0)
    count = 0
    for k in iter_T(N):
        d = denominator_factors(N, k)
        den = 1
        for dj in d:
            den *= dj
        guard = Fraction(1)
        for j in range(2, n + 1):
            kj = k[j - 2]
            guard *= comb(d[j - 1], kj) * bernoulli_number(kj)
        if not guard:
            count += d[0] + 1
            continue
        inner = Fraction(0)
        for v1 in range(d[0] + 1):
            inner += comb(d[0], v1) * alpha_scalar ** (d[0] - v1) * bernoulli_number(v1)
        count += d[0] + 1
        total += guard * inner / den
    return EvalReport(n, alpha, N, variant, (-1) ** n * total, False, None, count)


def mzv_nonpositive(N: Sequence[int], variant=Variant.CORRECTED) -> EvalReport:
    """Multiple zeta value at -N (all shifts equal to 1)."""
    N = as_multi_index(N)
    return zeta_value(AlphaVec.broadcast(1, len(N)), N, variant)
