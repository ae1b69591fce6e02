"""Sparse multivariate polynomials over the rationals in variables a1..an.

Besides ring arithmetic this module provides the transform pair linking a
polynomial ``P`` with ``Q`` such that ``P(a) = integral over [0,1]^n of Q(a+t)``:

* :func:`bernoullize` sends ``prod a_i^L_i`` to ``prod B_{L_i}(a_i)`` (P -> Q);
* :func:`cube_integrate_shifted` integrates ``Q(a+t)`` over the unit cube (Q -> P).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .arith import bernoulli_polynomial, format_rational

Exponent = tuple[int, ...]


class DimensionError(ValueError):
    pass


class MultiPoly:
    """Immutable polynomial stored as ``{exponent tuple: nonzero Fraction}``."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise DimensionError(f"bad exponent {exp} for nvars={nvars}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.nvars = nvars
        self._terms = MappingProxyType(clean)
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "MultiPoly":
        # caller guarantees canonical form
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = MappingProxyType({e: c for e, c in terms.items() if c})
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        """The variable a_{i+1} (0-based index)."""
        if not 0 <= i < nvars:
            raise DimensionError(f"variable index {i} out of range")
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def univariate(cls, coeffs: Sequence, nvars: int = 1, i: int = 0) -> "MultiPoly":
        """Lift ascending coefficients of a polynomial in one variable."""
        terms = {}
        for d, c in enumerate(coeffs):
            exp = [0] * nvars
            exp[i] = d
            terms[tuple(exp)] = c
        return cls(nvars, terms)

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly._raw(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly._raw(self.nvars, {e: c * v for e, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __call__(self, *point) -> Fraction:
        return eval_poly(self, point)

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {dict(self._terms)!r})"

    def __str__(self):
        return format_poly(self)


def poly_arith(p: MultiPoly, q, op: str) -> MultiPoly:
    """Dispatch ``add``, ``mul`` or ``scale`` (q is then a rational)."""
    if op == "add":
        return p + q
    if op == "mul":
        if not isinstance(q, MultiPoly):
            raise TypeError("mul expects a MultiPoly")
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def eval_poly(p: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != p.nvars:
        raise DimensionError(f"point has {len(point)} coordinates, expected {p.nvars}")
    xs = [Fraction(x) for x in point]
    total = Fraction(0)
    for exp, c in p.terms.items():
        term = c
        for x, e in zip(xs, exp):
            if e:
                term *= x**e
        total += term
    return total


def _graded_lex_key(exp: Exponent):
    return (-sum(exp), tuple(-e for e in exp))


def format_poly(p: MultiPoly) -> str:
    """``coef * a1^e1 ... an^en`` terms joined by `` + ``, graded-lex order."""
    if p.is_zero():
        return "0"
    parts = []
    for exp in sorted(p.terms, key=_graded_lex_key):
        factors = [format_rational(p.terms[exp])]
        factors += [f"a{i + 1}^{e}" for i, e in enumerate(exp) if e]
        parts.append(" * ".join(factors))
    return " + ".join(parts)


def substitute_univariate(
    p: MultiPoly, image: Callable[[int], Sequence[Fraction]]
) -> MultiPoly:
    """Replace every ``a_i^m`` by the univariate polynomial ``image(m)`` in a_i.

    ``image(m)`` gives ascending coefficients.  The map is applied
    independently per variable, so a monomial becomes a product of
    polynomials in distinct variables and expands without cross terms.
    """
    out: dict[Exponent, Fraction] = {}
    for exp, c in p.terms.items():
        partial: dict[Exponent, Fraction] = {(): c}
        for m in exp:
            coeffs = image(m)
            nxt: dict[Exponent, Fraction] = {}
            for e, v in partial.items():
                for d, w in enumerate(coeffs):
                    if w:
                        nxt[e + (d,)] = v * w
            partial = nxt
        for e, v in partial.items():
            out[e] = out.get(e, 0) + v
    return MultiPoly._raw(p.nvars, out)


def bernoullize(p: MultiPoly) -> MultiPoly:
    return substitute_univariate(p, bernoulli_polynomial)


_shift_integral_memo: dict[int, tuple[Fraction, ...]] = {}


def _shift_integral(m: int) -> tuple[Fraction, ...]:
    # integral_0^1 (a+t)^m dt = ((a+1)^{m+1} - a^{m+1}) / (m+1)
    coeffs = _shift_integral_memo.get(m)
    if coeffs is None:
        coeffs = tuple(Fraction(comb(m + 1, i), m + 1) for i in range(m + 1))
        _shift_integral_memo[m] = coeffs
    return coeffs


def cube_integrate_shifted(q: MultiPoly) -> MultiPoly:
    return substitute_univariate(q, _shift_integral)


def poly_from_terms(nvars: int, terms: Iterable[tuple[Exponent, object]]) -> MultiPoly:
    """Accumulate possibly repeated ``(exponent, coefficient)`` pairs."""
    acc: dict[Exponent, Fraction] = {}
    for e, c in terms:
        acc[e] = acc.get(e, 0) + Fraction(c)
    return MultiPoly(nvars, acc)
