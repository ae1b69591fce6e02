"""Exit criteria.  Each test prints one PASS/FAIL line in the terminal summary.

Tolerances and runtime budgets are fixed here; nothing is calibrated later.
"""

import contextlib
import itertools
import random
import time
from fractions import Fraction as F
from pathlib import Path

from mhz.arith import bernoulli_polynomial, eval_univariate
from mhz.cli import main
from mhz.evaluators import (
    mzv_nonpositive,
    zeta_direct,
    zeta_hurwitz_special,
    zeta_value,
)
from mhz.indexsets import AlphaVec, Variant, is_polar
from mhz.oracles import (
    DivergentExpansion,
    Tolerance,
    oracle_zeta,
    raabe_numeric_check,
    y_numeric,
    y_series_numeric,
)
from mhz.polycube import MultiPoly, bernoullize, cube_integrate_shifted

FIXTURES = Path(__file__).parent / "fixtures"


def B(m, x):
    return eval_univariate(bernoulli_polynomial(m), F(x))


@contextlib.contextmanager
def criterion(log, label, budget):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"runtime {elapsed:.2f}s exceeds {budget}s"
    except BaseException as exc:
        log.append(f"FAIL  {label}: {exc}".splitlines()[0])
        raise
    log.append(f"PASS  {label} ({elapsed:.2f}s)")


def test_1_classical_n1_law(acceptance_log):
    with criterion(acceptance_log, "1 classical n=1 law, exact", 1.0):
        for a in (F(1), F(1, 2), F(1, 3), F(5, 2)):
            for N in range(21):
                assert zeta_value((a,), (N,), Variant.CORRECTED).value == -B(N + 1, a) / (N + 1)
        assert zeta_value((1,), (0,)).value == F(-1, 2)
        assert zeta_value((1,), (1,)).value == F(-1, 12)
        assert zeta_value((1,), (2,)).value == 0


def test_2_oracle_equivalence_n2(acceptance_log):
    with criterion(acceptance_log, "2 oracle equivalence n=2, exact", 10.0):
        checked = 0
        for alpha in [(1, 1), (1, F(3, 2)), (F(1, 2), 1)]:
            for N in itertools.product(range(7), repeat=2):
                if sum(N) % 2 == 1:
                    assert zeta_value(alpha, N).value == oracle_zeta(alpha, N), (alpha, N)
                    checked += 1
        assert checked == 3 * 24


def _random_poly(rng: random.Random) -> MultiPoly:
    n = rng.randint(1, 3)
    terms = {}
    for _ in range(rng.randint(1, 6)):
        degree = rng.randint(0, 8)
        exp = [0] * n
        for _ in range(degree):
            exp[rng.randrange(n)] += 1
        terms[tuple(exp)] = F(rng.randint(-100, 100), rng.randint(1, 100))
    return MultiPoly(n, terms)


def test_3_bernoulli_round_trip(acceptance_log):
    with criterion(acceptance_log, "3 Bernoulli round trip on 250 random polynomials", 10.0):
        rng = random.Random(20240611)
        polys = [_random_poly(rng) for _ in range(250)]
        assert sum(1 for p in polys if not p.is_zero()) >= 200
        for p in polys:
            assert p.total_degree() <= 8
            assert cube_integrate_shifted(bernoullize(p)) == p


def test_4_pipeline_agreement(acceptance_log):
    with criterion(acceptance_log, "4 direct double sum == bernoullize pipeline, exact", 10.0):
        for alpha in [(1, 1, 1), (1, F(3, 2), 2), (F(1, 2), F(1, 2), F(1, 2))]:
            for n in (1, 2, 3):
                for N in itertools.product(range(4), repeat=n):
                    direct = zeta_direct(alpha[:n], N).value
                    assert direct == zeta_value(alpha[:n], N).value, (alpha[:n], N)


def test_5_variant_arbitration(acceptance_log):
    with criterion(acceptance_log, "5 variant arbitration within 1e-6", 30.0):
        tol = Tolerance(abs_eps=1e-6)
        hits = {v: [] for v in Variant}
        for alpha in [(1, F(3, 2)), (1, F(5, 4))]:
            for s in [(3, 2), (4, 3), (2, 2)]:
                quad = y_numeric(alpha, s, tol)
                for v in Variant:
                    try:
                        series = y_series_numeric(alpha, s, v, tol)
                    except DivergentExpansion:
                        hits[v].append(False)
                        continue
                    hits[v].append(abs(series - quad) <= 1e-6)
        per_point = [sum(hits[v][i] for v in Variant) for i in range(6)]
        assert per_point == [1] * 6
        winners = [v for v in Variant if all(hits[v])]
        assert winners == [Variant.CORRECTED]
        for a in (F(1), F(1, 2), F(2)):
            assert abs(y_numeric((a, a), (3, 2), tol) - float(1 / (3 * a**3))) <= 1e-6


def test_6_specialization_coherence(acceptance_log):
    with criterion(acceptance_log, "6 specialization coherence, exact", 5.0):
        for n in (1, 2, 3):
            for N in itertools.product(range(4), repeat=n):
                for a in (F(1), F(1, 2), F(5, 2)):
                    ref = zeta_value(AlphaVec.broadcast(a, n), N).value
                    assert zeta_hurwitz_special(a, N).value == ref
                assert mzv_nonpositive(N).value == zeta_value((1,) * n, N).value


def test_7_raabe_numeric(acceptance_log):
    with criterion(acceptance_log, "7 Raabe numeric check, abs_eps 1e-5", 30.0):
        tol = Tolerance(abs_eps=1e-5)
        for alpha, s in [((1,), (3,)), ((F(1, 2),), (2,)), ((1, 1), (3, 2))]:
            lhs, rhs, passed = raabe_numeric_check(alpha, s, tol)
            assert passed, (alpha, s, lhs, rhs)


def test_8_pole_scan_consistency(acceptance_log, capsys):
    with criterion(acceptance_log, "8 pole scan empty and all values finite", 10.0):
        for n in (1, 2, 3):
            for N in itertools.product(range(5), repeat=n):
                assert is_polar(N) == (False, None)
                report = zeta_value((1, F(3, 2), 2)[:n], N)
                assert not report.polar and isinstance(report.value, F)
            assert main(["poles", "--n", str(n), "--Nmax", "4"]) == 0
            assert capsys.readouterr().out == (FIXTURES / f"poles_n{n}_Nmax4.txt").read_text()


def test_9_regression_constants(acceptance_log):
    with criterion(acceptance_log, "9 regression constants, exact", 5.0):
        assert zeta_value((1, 1), (0, 0), Variant.CORRECTED).value == F(-1, 6)
        for a in (F(1), F(1, 2), F(2)):
            assert zeta_value((a, a), (0, 0)).value == (B(2, a) - B(1, a)) / 2
