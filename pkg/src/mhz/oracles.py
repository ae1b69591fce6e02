"""Independent checks: an exact innermost-first summation oracle and float
series/quadrature evaluations in the region of absolute convergence.

Floating point lives only here.  The exact oracle uses nothing but the
one-variable identity ``sum_{m>=0} (x+m)^N = -B_{N+1}(x)/(N+1)`` (valid as the
Hurwitz value at s = -N) applied to the innermost index, followed by a
re-expansion in the next shift.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
from scipy import integrate

from .arith import bernoulli_polynomial
from .indexsets import AlphaVec, PreconditionError, Variant, as_multi_index

__all__ = [
    "Tolerance",
    "SignatureS",
    "ConvergenceError",
    "DivergentExpansion",
    "is_regular",
    "oracle_zeta",
    "hurwitz_nonpositive",
    "series_zeta_numeric",
    "SeriesResult",
    "y_closed_form_equal",
    "y_numeric",
    "y_series_numeric",
    "raabe_numeric_check",
    "RaabeResult",
]


class ConvergenceError(RuntimeError):
    pass


class DivergentExpansion(ConvergenceError):
    pass


@dataclass(frozen=True)
class Tolerance:
    abs_eps: float = 1e-6
    cutoff: int = 10_000

    def __post_init__(self):
        if not self.abs_eps > 0:
            raise ValueError("abs_eps must be positive")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


@dataclass(frozen=True)
class SignatureS:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(s) for s in self.entries)
        if not entries or any(s < 2 for s in entries):
            raise PreconditionError("every s_i must be an integer >= 2")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, s) -> "SignatureS":
        return s if isinstance(s, SignatureS) else cls(tuple(s))

    def __len__(self):
        return len(self.entries)


# ---------------------------------------------------------------- exact oracle


def is_regular(N: Sequence[int]) -> bool:
    """Conservative regularity predicate for comparisons at -N.

    n = 1 is always regular; otherwise every tail sum N_j + ... + N_n with
    j < n must be odd (for n = 2 this is exactly N_1 + N_2 odd).
    """
    N = as_multi_index(N)
    n = len(N)
    tail = 0
    for j in range(n - 1, -1, -1):
        tail += N[j]
        if j < n - 1 and tail % 2 == 0:
            return False
    return True


def hurwitz_nonpositive(M: int, x) -> Fraction:
    """Classical zeta(-M, x) = -B_{M+1}(x)/(M+1)."""
    x = Fraction(x)
    coeffs = bernoulli_polynomial(M + 1)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return -acc / (M + 1)


def _shifted_bernoulli(m: int, shift: Fraction) -> list[Fraction]:
    """Ascending coefficients in W of B_m(W + shift)."""
    base = bernoulli_polynomial(m)
    out = [Fraction(0)] * (m + 1)
    for i, c in enumerate(base):
        if not c:
            continue
        # c (W + shift)^i
        for r in range(i + 1):
            out[r] += c * comb(i, r) * shift ** (i - r)
    return out


def oracle_zeta(alpha, N: Sequence[int], allow_irregular: bool = False) -> Fraction:
    """zeta_n(alpha; -N) by summing the innermost index first, exactly.

    With ``S_j`` the sum over ``m_j..m_n`` as a polynomial in
    ``W = m_1 + ... + m_{j-1} + alpha_{j-1}``, a level is
    ``S_j(W) = sum_e c_e * -B_{e+N_j+1}(W + delta_j)/(e+N_j+1)`` where ``c_e``
    are the coefficients of ``S_{j+1}`` in ``m_1 + ... + m_j + alpha_j``.
    """
    N = as_multi_index(N)
    alpha = AlphaVec.of(alpha)
    n = len(N)
    if len(alpha) != n:
        raise PreconditionError("alpha and N must have equal length")
    if not allow_irregular and not is_regular(N):
        raise PreconditionError(f"-{N} is not a regular point; pass allow_irregular=True")

    coeffs: list[Fraction] = [Fraction(1)]
    for j in range(n, 1, -1):
        shift = alpha[j - 1] - alpha[j - 2]
        nxt: list[Fraction] = []
        for e, c in enumerate(coeffs):
            if not c:
                continue
            m = e + N[j - 1] + 1
            poly = _shifted_bernoulli(m, shift)
            if len(poly) > len(nxt):
                nxt.extend([Fraction(0)] * (len(poly) - len(nxt)))
            for r, p in enumerate(poly):
                nxt[r] -= c * p / m
        coeffs = nxt
    return sum(
        (c * hurwitz_nonpositive(e + N[0], alpha[0]) for e, c in enumerate(coeffs) if c),
        Fraction(0),
    )


# ----------------------------------------------------------- truncated series


@dataclass(frozen=True)
class SeriesResult:
    value: float
    tail_bound: float

    def __float__(self):
        return self.value


def _tail_1d(s: int, a: float, cutoff: int) -> float:
    # sum_{m > C} (m + a)^-s <= integral_C^inf (x + a)^-s dx
    return (cutoff + a) ** (1 - s) / (s - 1)


def _hurwitz_upper(s: int, a: float) -> float:
    return a ** (-s) + a ** (1 - s) / (s - 1)


def _series_box(alphas: Sequence[float], s: Sequence[int], cutoff: int) -> float:
    """Sum over m in {0..cutoff}^n of prod (m_1+...+m_i+alpha_i)^-s_i.

    Evaluated innermost-first: H_i(t) = sum_{m=0}^{C} f_i(t+m) H_{i+1}(t+m),
    with t the partial index sum, using prefix sums so the cost is O(n C).
    """
    n = len(s)
    C = cutoff
    H = None
    for i in range(n, 0, -1):
        u = np.arange(i * C + 1, dtype=float)
        g = (u + alphas[i - 1]) ** (-float(s[i - 1]))
        if H is not None:
            g = g * H
        prefix = np.concatenate(([0.0], np.cumsum(g)))
        t = np.arange((i - 1) * C + 1)
        H = prefix[t + C + 1] - prefix[t]
        # partial sums are sums of positive terms
        if not np.all(H > 0):
            raise AssertionError("non-positive partial sum")
    return float(H[0])


def series_zeta_numeric(alpha, s, tol: Tolerance = Tolerance()) -> SeriesResult:
    """Truncated defining series with a rigorous (crude) tail bound.

    The bound uses ``(m_1+...+m_i+alpha_i)^-s_i <= (m_i+alpha_i)^-s_i``, which
    majorises the missing region by one-dimensional Hurwitz tails.
    """
    s = SignatureS.of(s).entries
    alphas = [float(a) for a in AlphaVec.of(alpha).alphas]
    n = len(s)
    if len(alphas) != n:
        raise PreconditionError("alpha and s must have equal length")
    if n > 3:
        raise PreconditionError("series_zeta_numeric supports n <= 3")
    value = _series_box(alphas, s, tol.cutoff)
    tail = 0.0
    for i in range(n):
        part = _tail_1d(s[i], alphas[i], tol.cutoff)
        for j in range(n):
            if j != i:
                part *= _hurwitz_upper(s[j], alphas[j])
        tail += part
    return SeriesResult(value, tail)


# ------------------------------------------------------------ the integral Y


def y_closed_form_equal(alpha_scalar, s: Sequence[int]) -> float:
    """Y_2 with equal shifts: alpha^(2-s1-s2) / ((s2-1)(s1+s2-2))."""
    s1, s2 = s
    return float(Fraction(alpha_scalar) ** (2 - s1 - s2) / ((s2 - 1) * (s1 + s2 - 2)))


def y_numeric(alpha, s, tol: Tolerance = Tolerance()) -> float:
    """Adaptive quadrature of the defining integral over [0, inf)^n, n <= 2.

    QUADPACK maps the half line onto a finite interval, so no truncation
    radius is needed; the requested absolute error is far below ``abs_eps``.
    """
    s = SignatureS.of(s).entries
    alphas = [float(a) for a in AlphaVec.of(alpha).alphas]
    n = len(s)
    if len(alphas) != n:
        raise PreconditionError("alpha and s must have equal length")
    eps = min(tol.abs_eps * 1e-3, 1e-10)
    if n == 1:
        a1, = alphas
        val, err = integrate.quad(lambda x: (x + a1) ** -s[0], 0, np.inf, epsabs=eps, epsrel=0, limit=200)
    elif n == 2:
        a1, a2 = alphas
        s1, s2 = s

        def inner(x1):
            v, _ = integrate.quad(
                lambda x2: (x1 + x2 + a2) ** -s2, 0, np.inf, epsabs=eps * 1e-2, epsrel=0, limit=200
            )
            return (x1 + a1) ** -s1 * v

        val, err = integrate.quad(inner, 0, np.inf, epsabs=eps, epsrel=0, limit=200)
    else:
        raise PreconditionError("y_numeric supports n <= 2")
    if not err <= tol.abs_eps:
        raise ConvergenceError(f"quadrature error estimate {err:g} exceeds {tol.abs_eps:g}")
    return val


def _series_radii(alpha: AlphaVec, variant: Variant) -> list[tuple[Fraction, Fraction]]:
    """(expansion base b_j, smallest point it is expanded around) per j >= 2."""
    n = len(alpha)
    out = []
    for j in range(2, n + 1):
        if variant is Variant.CORRECTED:
            # z + alpha_j - alpha_1 around z + alpha_{j-1} - alpha_1, z >= alpha_1
            out.append((alpha[j - 1] - alpha[j - 2], alpha[j - 2]))
        else:
            # paper substitution: z + sum_{i<=j} alpha_i around z + sum_{i<j} alpha_i
            out.append((alpha[j - 1], sum(alpha.alphas[: j - 1], Fraction(0))))
    return out


def y_series_numeric(alpha, s, variant=Variant.CORRECTED, tol: Tolerance = Tolerance(), strict: bool = True) -> float:
    """Truncated k-series for Y_n(alpha; s) in the convergence region.

    Terms are ``prod_j C(-f_j, k_j) b_j^k_j * alpha_1^-f_1 / prod_j f_j`` with
    ``f_j = s_j + ... + s_n - (n-j+1) + k_{j+1} + ... + k_n`` and ``b_j`` the
    increment (corrected) or ``alpha_j`` (paper).  Each index is summed until
    the ratio test bounds the geometric tail below ``abs_eps``.  With
    ``strict=False`` a divergent expansion is summed to the cutoff anyway and
    may return ``inf``.
    """
    s = SignatureS.of(s).entries
    alpha = AlphaVec.of(alpha)
    variant = Variant.parse(variant)
    n = len(s)
    if len(alpha) != n:
        raise PreconditionError("alpha and s must have equal length")
    radii = _series_radii(alpha, variant)
    divergent = any(abs(b) >= r for b, r in radii)
    if divergent and strict:
        raise DivergentExpansion(f"{variant.value} expansion diverges for alpha={alpha.alphas}")

    bs = [float(b) for b, _ in radii]
    a1 = float(alpha[0])
    tail_s = [0] + [sum(s[j - 1 :]) for j in range(1, n + 1)]
    budget = tol.abs_eps * 1e-3

    def f(j: int, ksum: int) -> int:
        return tail_s[j] - (n - j + 1) + ksum

    def level(j: int, ksum: int) -> float:
        # sum over k_j, ..., k_2 given k_{j+1..n} summing to ksum; j >= 2
        if j == 1:
            fj = f(1, ksum)
            return a1 ** (-fj) / fj
        fj = f(j, ksum)
        b = bs[j - 2]
        total = 0.0
        coeff = 1.0  # C(-f_j, k) b^k built incrementally
        prev = None
        for k in range(tol.cutoff + 1):
            if k:
                coeff *= (-fj - (k - 1)) / k * b
            if coeff == 0.0:
                break
            term = coeff * level(j - 1, ksum + k) / fj
            if not math.isfinite(term):
                return math.inf
            total += term
            if prev and term:
                ratio = abs(term / prev)
                if ratio < 1 and abs(term) * ratio / (1 - ratio) < budget:
                    break
            prev = term
        else:
            if not divergent:
                raise ConvergenceError("k-series did not settle before the cutoff")
        return total

    if n == 1:
        return a1 ** (-f(1, 0)) / f(1, 0)
    return level(n, 0)


# --------------------------------------------------------------------- Raabe


@dataclass(frozen=True)
class RaabeResult:
    lhs: float
    rhs: float
    passed: bool
    bound: float

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.passed))


def _cube_rule(n: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    pts = list(itertools.product(range(order), repeat=n))
    return [tuple(x[i] for i in p) for p in pts], [math.prod(w[i] for i in p) for p in pts]


def _raabe_rhs(alphas: Sequence[float], s: Sequence[int], cutoff: int, order: int) -> float:
    nodes, weights = _cube_rule(len(s), order)
    total = 0.0
    for t, w in zip(nodes, weights):
        shifted = [a + sum(t[: i + 1]) for i, a in enumerate(alphas)]
        total += w * _series_box(shifted, s, cutoff)
    return total


def raabe_numeric_check(alpha, s, tol: Tolerance = Tolerance()) -> RaabeResult:
    """Compare Y_n with the unit-cube average of the shifted series, n <= 2.

    The right side uses tensor Gauss-Legendre in t (the integrand is smooth
    on the closed cube); its quadrature error is estimated from two orders.
    Pass iff the gap is within ``abs_eps`` plus the series tail bound.
    """
    s = SignatureS.of(s).entries
    alpha = AlphaVec.of(alpha)
    n = len(s)
    if n > 2:
        raise PreconditionError("raabe_numeric_check supports n <= 2")
    if len(alpha) != n:
        raise PreconditionError("alpha and s must have equal length")
    alphas = [float(a) for a in alpha.alphas]
    lhs = y_numeric(alpha, s, tol)
    rhs = _raabe_rhs(alphas, s, tol.cutoff, 12)
    rhs_hi = _raabe_rhs(alphas, s, tol.cutoff, 16)
    # every shifted alpha is >= the unshifted one, so this tail majorises all nodes
    tail = series_zeta_numeric(alpha, s, tol).tail_bound
    bound = tol.abs_eps + tail + abs(rhs_hi - rhs)
    return RaabeResult(lhs, rhs_hi, abs(lhs - rhs_hi) <= bound, bound)
