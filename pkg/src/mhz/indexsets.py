"""Admissible index sets, denominator factors, pole scan and coefficient assembly.

For a point ``N`` and auxiliary indices ``k = (k_2, ..., k_n)`` the
denominator factors are

    d_j(N, k) = N_j + ... + N_n + (n - j + 1) - (k_{j+1} + ... + k_n)

and ``T(N)`` is the finite set of ``k`` with ``0 <= k_j <= d_j`` for
``j = 2..n``.  Vectors of auxiliary indices are plain tuples ``(k_2, ..., k_n)``
so ``k[j - 2]`` holds ``k_j``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

MultiIndex = tuple[int, ...]
KVector = tuple[int, ...]


class Variant(str, enum.Enum):
    """Which coefficient assembly to use.

    ``corrected`` expands in the increments ``alpha_j - alpha_{j-1}`` and gives
    ``alpha_1`` the exponent ``M - v_1``.  ``paper`` uses the alternative
    form: bases ``alpha_j`` and exponent ``M - (v_2 + ... + v_n)``.
    """

    CORRECTED = "corrected"
    PAPER = "paper"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class PreconditionError(ValueError):
    pass


def as_multi_index(N: Sequence[int]) -> MultiIndex:
    N = tuple(int(x) for x in N)
    if not N:
        raise PreconditionError("N must have at least one entry")
    if any(x < 0 for x in N):
        raise PreconditionError(f"N entries must be nonnegative: {N}")
    return N


@dataclass(frozen=True)
class AlphaVec:
    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        alphas = tuple(Fraction(a) for a in self.alphas)
        if not alphas:
            raise PreconditionError("alpha must have at least one entry")
        if any(a <= 0 for a in alphas):
            raise PreconditionError("every alpha_i must be positive")
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def of(cls, alpha) -> "AlphaVec":
        if isinstance(alpha, AlphaVec):
            return alpha
        return cls(tuple(alpha))

    @classmethod
    def broadcast(cls, value, n: int) -> "AlphaVec":
        return cls((Fraction(value),) * n)

    def __len__(self):
        return len(self.alphas)

    def __getitem__(self, i):
        return self.alphas[i]

    @property
    def deltas(self) -> tuple[Fraction, ...]:
        """(delta_2, ..., delta_n) with delta_j = alpha_j - alpha_{j-1}."""
        a = self.alphas
        return tuple(a[j] - a[j - 1] for j in range(1, len(a)))


def denominator_factors(N: Sequence[int], k: Sequence[int]) -> tuple[int, ...]:
    n = len(N)
    if len(k) != n - 1:
        raise PreconditionError(f"k must have {n - 1} entries, got {len(k)}")
    d = [0] * n
    tail_n = 0
    tail_k = 0
    for j in range(n, 0, -1):
        tail_n += N[j - 1]
        d[j - 1] = tail_n + (n - j + 1) - tail_k
        if j >= 2:
            tail_k += k[j - 2]
    return tuple(d)


def iter_T(N: Sequence[int]) -> Iterator[KVector]:
    """Yield T(N) with k_n outermost, each coordinate ascending."""
    N = as_multi_index(N)
    n = len(N)
    if n == 1:
        yield ()
        return
    suffix = [0] * (n + 2)
    for j in range(n, 0, -1):
        suffix[j] = suffix[j + 1] + N[j - 1]
    k = [0] * (n + 1)

    def rec(j: int, ksum: int):
        # bound for k_j depends only on k_{j+1..n}
        if j == 1:
            yield tuple(k[2:])
            return
        bound = suffix[j] + (n - j + 1) - ksum
        for kj in range(bound + 1):
            k[j] = kj
            yield from rec(j - 1, ksum + kj)
        k[j] = 0

    yield from rec(n, 0)


def enumerate_T(N: Sequence[int]) -> list[KVector]:
    return list(iter_T(N))


def is_polar(N: Sequence[int]) -> tuple[bool, KVector | None]:
    """Scan for a k with nonvanishing numerator guards and a vanishing d_j.

    Guards ``C(d_j, k_j)`` for integer ``d_j >= 0`` vanish exactly when
    ``k_j > d_j``, so the search walks the ``T(N)`` box and additionally
    accepts the boundary case ``d_j = 0, k_j = 0``.
    """
    N = as_multi_index(N)
    n = len(N)
    suffix = [0] * (n + 2)
    for j in range(n, 0, -1):
        suffix[j] = suffix[j + 1] + N[j - 1]
    k = [0] * (n + 1)

    def rec(j: int, ksum: int):
        d = suffix[j] + (n - j + 1) - ksum
        if d == 0:
            return tuple(k[2:])
        if j == 1:
            return None
        if d < 0:
            # guards of a negative integer top never vanish; unreachable while
            # every earlier guard holds, since then d_j >= N_j + 1
            raise AssertionError(f"negative denominator factor at j={j}")
        for kj in range(d + 1):
            k[j] = kj
            found = rec(j - 1, ksum + kj)
            if found is not None:
                return found
        k[j] = 0
        return None

    witness = rec(n, 0)
    return witness is not None, witness


def _pow(base: Fraction, e: int) -> Fraction:
    # 0^0 = 1
    if e == 0:
        return Fraction(1)
    return base**e


def coefficient_A(
    N: Sequence[int],
    k: Sequence[int],
    v: Sequence[int],
    alpha,
    variant=Variant.CORRECTED,
) -> Fraction:
    """Coefficient of ``a^v`` (times prod d_j, up to sign) in the shifted k-term."""
    N = as_multi_index(N)
    alpha = AlphaVec.of(alpha)
    variant = Variant.parse(variant)
    n = len(N)
    if len(alpha) != n or len(v) != n:
        raise PreconditionError("alpha, v and N must have equal length")
    d = denominator_factors(N, k)
    M = d[0]
    for j in range(2, n + 1):
        if not 0 <= k[j - 2] <= d[j - 1]:
            raise PreconditionError(f"k={tuple(k)} is not in T(N)")
        if not 0 <= v[j - 1] <= k[j - 2]:
            raise PreconditionError(f"v_{j} must lie in [0, k_{j}]")
    if not 0 <= v[0] <= M:
        raise PreconditionError(f"v_1 must lie in [0, {M}]")

    if variant is Variant.CORRECTED:
        bases = alpha.deltas
        exp1 = M - v[0]
    else:
        bases = alpha.alphas[1:]
        exp1 = M - sum(v[1:])

    out = Fraction(comb(M, v[0])) * _pow(alpha[0], exp1)
    for j in range(2, n + 1):
        kj, vj = k[j - 2], v[j - 1]
        out *= comb(d[j - 1], kj) * comb(kj, vj) * _pow(bases[j - 2], kj - vj)
    return out


def iter_kv(N: Sequence[int]) -> Iterator[tuple[KVector, tuple[int, ...], tuple[int, ...]]]:
    """Yield ``(k, v, d)`` over all summation pairs of the double sum."""
    for k in iter_T(N):
        d = denominator_factors(N, k)
        ranges = [range(d[0] + 1)] + [range(kj + 1) for kj in k]
        for v in itertools.product(*ranges):
            yield k, v, d


def term_count(N: Sequence[int]) -> int:
    total = 0
    for k in iter_T(N):
        d = denominator_factors(N, k)
        c = d[0] + 1
        for kj in k:
            c *= kj + 1
        total += c
    return total
