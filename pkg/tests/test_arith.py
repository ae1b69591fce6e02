import threading
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhz.arith import (
    BernoulliCache,
    bernoulli_number,
    bernoulli_polynomial,
    binomial,
    eval_univariate,
    format_rational,
    gen_binomial,
    parse_rational,
)


@pytest.mark.parametrize("n,k,expected", [(5, 2, 10), (7, 0, 1), (3, 5, 0)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


def test_gen_binomial_examples():
    assert gen_binomial(F(1, 2), 2) == F(-1, 8)
    assert gen_binomial(-2, 3) == -4
    assert gen_binomial(F(7, 3), 0) == 1


@given(st.integers(0, 40), st.integers(0, 40))
def test_gen_binomial_matches_integer_binomial(n, k):
    assert gen_binomial(n, k) == binomial(n, k)


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == F(-1, 2)
    # frozen from sympy.bernoulli(12)
    assert bernoulli_number(12) == F(-691, 2730)
    assert all(bernoulli_number(m) == 0 for m in range(3, 41, 2))


def test_bernoulli_recurrence_holds():
    for m in range(1, 30):
        assert sum(binomial(m + 1, j) * bernoulli_number(j) for j in range(m + 1)) == 0


def test_bernoulli_polynomials_small():
    assert bernoulli_polynomial(0) == (1,)
    assert bernoulli_polynomial(1) == (F(-1, 2), 1)
    assert bernoulli_polynomial(2) == (F(1, 6), -1, 1)


def _integrate_unit(coeffs):
    return sum(F(c, 1) / (i + 1) for i, c in enumerate(coeffs))


@pytest.mark.parametrize("m", range(1, 21))
def test_bernoulli_polynomial_mean_zero(m):
    assert _integrate_unit(bernoulli_polynomial(m)) == 0


@pytest.mark.parametrize("m", range(0, 21))
def test_bernoulli_difference_identity(m):
    # B_m(x+1) - B_m(x) = m x^{m-1}, compared coefficientwise
    coeffs = bernoulli_polynomial(m)
    shifted = [F(0)] * (m + 1)
    for i, c in enumerate(coeffs):
        for r in range(i + 1):
            shifted[r] += c * binomial(i, r)
    diff = [a - b for a, b in zip(shifted, coeffs)]
    expected = [F(0)] * (m + 1)
    if m:
        expected[m - 1] = F(m)
    assert diff == expected


@pytest.mark.parametrize("m", range(0, 21))
def test_bernoulli_at_half(m):
    assert eval_univariate(bernoulli_polynomial(m), F(1, 2)) == (F(2) ** (1 - m) - 1) * bernoulli_number(m)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_fraction_canonical_form(a, b):
    for r in (a + b, a - b, a * b) + ((a / b,) if b else ()):
        assert r.denominator > 0
        assert gcd(abs(r.numerator), r.denominator) == 1


@pytest.mark.parametrize("text,value", [("3", F(3)), ("-1/2", F(-1, 2)), ("4/6", F(2, 3)), (" 7/1 ", F(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1.5", "1/0", "abc", "1/2/3", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(st.fractions())
def test_format_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_cache_file_round_trip(tmp_path):
    path = tmp_path / "b.tsv"
    cache = BernoulliCache(path)
    assert cache[20] == F(-174611, 330)
    lines = path.read_text().splitlines()
    assert lines[0] == "0\t1/1"
    assert lines[1] == "1\t-1/2"
    assert lines[12] == "12\t-691/2730"
    reloaded = BernoulliCache(path)
    assert reloaded.highest == 20
    assert reloaded[12] == F(-691, 2730)


def test_cache_rejects_corrupt_file(tmp_path):
    path = tmp_path / "b.tsv"
    path.write_text("0\t1/1\n1\t1/2\n2\t1/6\n")
    with pytest.raises(ValueError):
        BernoulliCache(path)


def test_cache_concurrent_fill_is_idempotent():
    cache = BernoulliCache()
    results = []

    def worker(m):
        results.append((m, cache[m]))

    threads = [threading.Thread(target=worker, args=(m,)) for m in (30, 10, 40, 30, 2) * 4]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for m, value in results:
        assert value == bernoulli_number(m)
    assert cache.upto(40) == [bernoulli_number(m) for m in range(41)]
