"""Exact scalar arithmetic: rationals, binomials, Bernoulli numbers and polynomials.

Rationals are :class:`fractions.Fraction` values, which are kept in lowest
terms with a positive denominator after every operation.  Bernoulli numbers
follow the convention ``B_m = B_m(0)``, so ``B_1 = -1/2``.
"""

from __future__ import annotations

import os
import tempfile
import threading
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

__all__ = [
    "Rational",
    "BernoulliCache",
    "binomial",
    "gen_binomial",
    "bernoulli_number",
    "bernoulli_polynomial",
    "parse_rational",
    "format_rational",
    "default_cache",
    "set_default_cache",
]

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal.  Decimals are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def binomial(n: int, k: int) -> int:
    """C(n, k) for nonnegative integers; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial expects nonnegative arguments")
    return comb(n, k)


def gen_binomial(r, k: int) -> Fraction:
    """Generalized binomial r(r-1)...(r-k+1)/k! with a rational top."""
    if k < 0:
        raise ValueError("k must be >= 0")
    r = Fraction(r)
    num = Fraction(1)
    for i in range(k):
        num *= r - i
    return num / _factorial(k)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class BernoulliCache:
    """Append-only table of Bernoulli numbers.

    Entries are filled with the recurrence ``sum_{j<=m} C(m+1, j) B_j = 0``.
    A lock serialises extension; readers of already computed entries never
    block on it.  When ``path`` is given the table is loaded from it (one
    ``m<TAB>p/q`` record per line) and rewritten atomically whenever it grows.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self._table: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
        self._lock = threading.Lock()
        self.path = Path(path) if path is not None else None
        if self.path is not None and self.path.exists():
            self._load(self.path)

    @property
    def highest(self) -> int:
        return len(self._table) - 1

    def _load(self, path: Path) -> None:
        loaded: dict[int, Fraction] = {}
        with open(path, encoding="ascii") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    m, value = line.split("\t")
                    loaded[int(m)] = parse_rational(value)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: bad cache record") from None
        table = []
        for m in range(len(loaded)):
            if m not in loaded:
                break
            table.append(loaded[m])
        if len(table) > len(self._table):
            check = BernoulliCache()
            probe = min(len(table) - 1, 8)
            if table[: probe + 1] != [check[i] for i in range(probe + 1)]:
                raise ValueError(f"{path}: cache disagrees with recurrence")
            self._table = table

    def _save(self) -> None:
        assert self.path is not None
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".bernoulli-")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                for m, b in enumerate(self._table):
                    fh.write(f"{m}\t{b.numerator}/{b.denominator}\n")
            os.replace(tmp, self.path)
        except BaseException:
            os.unlink(tmp)
            raise

    def _extend(self, m: int) -> None:
        with self._lock:
            table = list(self._table)
            start = len(table)
            if start > m:
                return
            for k in range(start, m + 1):
                if k % 2 == 1:
                    table.append(Fraction(0))
                    continue
                s = sum((comb(k + 1, j) * table[j] for j in range(k)), Fraction(0))
                table.append(-s / (k + 1))
            # publish the complete list in one assignment
            self._table = table
            if self.path is not None:
                self._save()

    def __getitem__(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("Bernoulli index must be >= 0")
        table = self._table
        if m >= len(table):
            self._extend(m)
            table = self._table
        return table[m]

    def upto(self, m: int) -> list[Fraction]:
        self[m]
        return self._table[: m + 1]


_default_cache = BernoulliCache(os.environ.get("MHZ_CACHE") or None)


def default_cache() -> BernoulliCache:
    return _default_cache


def set_default_cache(cache: BernoulliCache) -> None:
    global _default_cache
    _default_cache = cache
    _bernoulli_poly_memo.clear()


def bernoulli_number(m: int) -> Fraction:
    return _default_cache[m]


_bernoulli_poly_memo: dict[int, tuple[Fraction, ...]] = {}


def bernoulli_polynomial(m: int) -> tuple[Fraction, ...]:
    """Coefficients of B_m(x) in ascending powers of x.

    >>> bernoulli_polynomial(2)
    (Fraction(1, 6), Fraction(-1, 1), Fraction(1, 1))
    """
    coeffs = _bernoulli_poly_memo.get(m)
    if coeffs is None:
        bs = _default_cache.upto(m)
        # x^i carries C(m, i) B_{m-i}
        coeffs = tuple(comb(m, i) * bs[m - i] for i in range(m + 1))
        _bernoulli_poly_memo[m] = coeffs
    return coeffs


def eval_univariate(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
