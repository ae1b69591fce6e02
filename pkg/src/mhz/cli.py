"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 pole, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import arith
from .arith import format_rational, parse_rational
from .evaluators import (
    mzv_nonpositive,
    y_shifted_poly,
    zeta_direct,
    zeta_hurwitz_special,
    zeta_polynomial,
    zeta_value,
)
from .indexsets import AlphaVec, PreconditionError, Variant, is_polar
from .oracles import (
    DivergentExpansion,
    Tolerance,
    hurwitz_nonpositive,
    oracle_zeta,
    raabe_numeric_check,
    y_closed_form_equal,
    y_numeric,
    y_series_numeric,
)
from .polycube import cube_integrate_shifted

EXIT_OK, EXIT_USAGE, EXIT_POLE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [parse_rational(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed index list: {text!r}") from None
    if any(x < 0 for x in out):
        raise UsageError("N entries must be nonnegative")
    return out


def _alpha(values: Sequence[Fraction], n: int) -> AlphaVec:
    if len(values) == 1 and n > 1:
        values = list(values) * n
    if len(values) != n:
        raise UsageError(f"alpha has {len(values)} entries, expected {n}")
    if any(a <= 0 for a in values):
        raise UsageError("alpha entries must be positive")
    return AlphaVec(tuple(values))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------- value


def cmd_value(args) -> int:
    N = _int_list(args.N)
    values = _rational_list(args.alpha)
    if len(values) != len(N):
        raise UsageError(f"alpha has {len(values)} entries but N has {len(N)}")
    alpha = _alpha(values, len(N))
    report = zeta_value(alpha, N, args.variant)
    _emit(report.to_json() + "\n", args.out)
    return EXIT_POLE if report.polar else EXIT_OK


# ----------------------------------------------------------------- table


def _cell_text(report) -> str:
    return "pole" if report.polar else format_rational(report.value)


def _latex_value(report) -> str:
    if report.polar:
        return r"\text{pole}"
    v = report.value
    if v.denominator == 1:
        return f"{v.numerator}"
    sign = "-" if v < 0 else ""
    return rf"{sign}\frac{{{abs(v.numerator)}}}{{{v.denominator}}}"


def cmd_table(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be >= 1")
    if args.Nmax < 0:
        raise UsageError("Nmax must be >= 0")
    alpha = _alpha(_rational_list(args.alpha), n)
    variant = Variant.parse(args.variant)
    points = list(itertools.product(range(args.Nmax + 1), repeat=n))
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        reports = list(pool.map(lambda N: zeta_value(alpha, N, variant), points))

    alpha_txt = [format_rational(a) for a in alpha.alphas]
    if args.format == "json":
        cells = [{"N": list(r.N), "value": _cell_text(r)} for r in reports]
        doc = {"n": n, "alpha": alpha_txt, "variant": variant.value, "Nmax": args.Nmax, "cells": cells}
        text = json.dumps(doc, indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow([f"N{i + 1}" for i in range(n)] + ["value"])
        for r in reports:
            writer.writerow(list(r.N) + [_cell_text(r)])
        text = buf.getvalue()
    else:
        lines = [
            r"\begin{tabular}{" + "r" * n + "l}",
            r"\toprule",
            " & ".join([f"$N_{i + 1}$" for i in range(n)] + ["value"]) + r" \\",
            r"\midrule",
        ]
        for r in reports:
            lines.append(" & ".join([str(x) for x in r.N] + [f"${_latex_value(r)}$"]) + r" \\")
        lines += [r"\bottomrule", r"\end{tabular}"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ----------------------------------------------------------------- poles


def scan_poles(n: int, Nmax: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    found = []
    for N in itertools.product(range(Nmax + 1), repeat=n):
        polar, witness = is_polar(N)
        if polar:
            found.append((N, witness))
    return found


def cmd_poles(args) -> int:
    if args.n < 1 or args.Nmax < 0:
        raise UsageError("need n >= 1 and Nmax >= 0")
    found = scan_poles(args.n, args.Nmax)
    lines = [f"scanned {(args.Nmax + 1) ** args.n} points, n={args.n}, Nmax={args.Nmax}"]
    if not found:
        lines.append("none found")
    for N, witness in found:
        lines.append(f"N={list(N)} witness k={list(witness)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _fmt(x) -> str | float | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return format_rational(x)
    return float(x)


def suite_special(rng: random.Random) -> list[dict]:
    cases = []
    scalars = [Fraction(1), Fraction(1, 2), Fraction(2), Fraction(rng.randint(1, 9), rng.randint(1, 9))]
    for n in (1, 2, 3):
        for a in scalars:
            for N in itertools.product(range(4), repeat=n):
                ref = zeta_value(AlphaVec.broadcast(a, n), N).value
                got = zeta_hurwitz_special(a, N).value
                ok = got == ref
                if a == 1:
                    ok = ok and mzv_nonpositive(N).value == ref
                cases.append({"n": n, "alpha": _fmt(a), "N": list(N), "value": _fmt(ref), "pass": ok})
    return cases


def suite_oracle(rng: random.Random) -> list[dict]:
    cases = []
    for a in (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(5, 2)):
        for N in range(21):
            got = zeta_value([a], [N]).value
            ref = hurwitz_nonpositive(N, a)
            cases.append({"n": 1, "alpha": [_fmt(a)], "N": [N], "value": _fmt(got), "oracle": _fmt(ref), "pass": got == ref})
    alphas = [(1, 1), (1, Fraction(3, 2)), (Fraction(1, 2), 1)]
    alphas.append((Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(1, 9), rng.randint(1, 9))))
    for a in alphas:
        for N in itertools.product(range(7), repeat=2):
            if sum(N) % 2 == 0:
                continue
            got = zeta_value(a, N).value
            ref = oracle_zeta(a, N)
            cases.append({"n": 2, "alpha": [_fmt(x) for x in a], "N": list(N), "value": _fmt(got), "oracle": _fmt(ref), "pass": got == ref})
    return cases


def _json_float(x: float):
    # JSON has no inf/nan
    return x if math.isfinite(x) else str(x)


ARBITRATION_ALPHAS = ((Fraction(1), Fraction(3, 2)), (Fraction(1), Fraction(5, 4)))
ARBITRATION_S = ((3, 2), (4, 3), (2, 2))


def arbitrate(tol: Tolerance, alphas=ARBITRATION_ALPHAS, signatures=ARBITRATION_S) -> dict:
    """Compare both variants' k-series against quadrature on a grid."""
    points = []
    matches: dict[str, list[bool]] = {v.value: [] for v in Variant}
    for a in alphas:
        for s in signatures:
            quad = y_numeric(a, s, tol)
            row = {"alpha": [_fmt(x) for x in a], "s": list(s), "quadrature": quad}
            for v in Variant:
                try:
                    val = y_series_numeric(a, s, v, tol)
                    divergent = False
                except DivergentExpansion:
                    val = y_series_numeric(a, s, v, tol, strict=False)
                    divergent = True
                delta = abs(val - quad)
                hit = (not divergent) and delta <= tol.abs_eps
                matches[v.value].append(hit)
                row[v.value] = {"value": _json_float(val), "delta": _json_float(delta), "divergent": divergent, "match": hit}
            row["verdict"] = [name for name in matches if matches[name][-1]]
            points.append(row)
    consistent = [name for name, hits in matches.items() if all(hits)]
    exactly_one = all(sum(matches[name][i] for name in matches) == 1 for i in range(len(points)))
    control = []
    for a in (Fraction(1), Fraction(1, 2), Fraction(2)):
        num = y_numeric((a, a), (3, 2), tol)
        exact = float(1 / (3 * a**3))
        control.append({"alpha": _fmt(a), "quadrature": num, "closed_form": exact, "pass": abs(num - exact) <= tol.abs_eps and y_closed_form_equal(a, (3, 2)) == exact})
    return {
        "points": points,
        "consistent_variant": consistent[0] if len(consistent) == 1 else None,
        "exactly_one_per_point": exactly_one,
        "equal_alpha_control": control,
        "pass": len(consistent) == 1 and exactly_one and all(c["pass"] for c in control),
    }


def suite_raabe(rng: random.Random, tol: Tolerance) -> list[dict]:
    cases = []
    grid = [((1,), (3,)), ((Fraction(1, 2),), (2,)), ((1, 1), (3, 2))]
    for a, s in grid:
        res = raabe_numeric_check(a, s, tol)
        cases.append({"kind": "numeric", "alpha": [_fmt(x) for x in a], "s": list(s), "lhs": res.lhs, "rhs": float(res.rhs), "bound": res.bound, "pass": bool(res.passed)})
    alphas = [(1, 1, 1), (1, Fraction(3, 2), 2), (Fraction(rng.randint(1, 9), rng.randint(1, 9)),) * 3]
    for a in alphas:
        for n in (1, 2, 3):
            for N in itertools.product(range(3), repeat=n):
                p = y_shifted_poly(a[:n], N)
                ok = cube_integrate_shifted(zeta_polynomial(a[:n], N)) == p
                cases.append({"kind": "polynomial", "alpha": [_fmt(x) for x in a[:n]], "N": list(N), "pass": ok})
    return cases


def suite_variants(rng: random.Random, tol: Tolerance) -> dict:
    report = arbitrate(tol)
    # exact-side discrimination: paper and corrected differ for equal alpha != 1
    differs = []
    for a in (Fraction(1, 2), Fraction(2), Fraction(3)):
        for N in ((0, 1), (1, 0), (1, 2)):
            c = zeta_value((a, a), N).value
            p = zeta_direct((a, a), N, Variant.PAPER).value
            differs.append({"alpha": _fmt(a), "N": list(N), "corrected": _fmt(c), "paper": _fmt(p), "differ": c != p})
    report["exact_discrimination"] = differs
    return report


SUITES = ("special", "oracle", "raabe", "variants")


def run_suite(name: str, seed: int, tol: Tolerance) -> tuple[bool, object]:
    rng = random.Random(f"{seed}:{name}")
    if name == "special":
        cases = suite_special(rng)
        return all(c["pass"] for c in cases), cases
    if name == "oracle":
        cases = suite_oracle(rng)
        return all(c["pass"] for c in cases), cases
    if name == "raabe":
        cases = suite_raabe(rng, tol)
        return all(c["pass"] for c in cases), cases
    if name == "variants":
        report = suite_variants(rng, tol)
        return report["pass"], report
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(args) -> int:
    tol = Tolerance(abs_eps=args.eps, cutoff=args.cutoff)
    names = SUITES if args.suite == "all" else (args.suite,)
    results = {}
    ok = True
    for name in names:
        passed, detail = run_suite(name, args.seed, tol)
        ok = ok and passed
        results[name] = {"pass": passed, "detail": detail}
    doc = {"seed": args.seed, "eps": args.eps, "cutoff": args.cutoff, "pass": ok, "suites": results}
    text = json.dumps(doc, indent=1) + "\n"
    summary = "".join(f"{name}: {'PASS' if r['pass'] else 'FAIL'}\n" for name, r in results.items())
    if args.out:
        _emit(text, args.out)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
    if not ok:
        for name, r in results.items():
            if not r["pass"]:
                sys.stderr.write(f"suite {name} failed\n")
    return EXIT_OK if ok else EXIT_VERIFY


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mhz", description="Exact values of generalized multiple Hurwitz zeta functions at non-positive integers.")
    parser.add_argument("--cache", help="Bernoulli cache file (overrides MHZ_CACHE)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="write output to FILE")
        p.add_argument("--cache", default=argparse.SUPPRESS, help="Bernoulli cache file")

    p = sub.add_parser("value", help="zeta_n(alpha; -N) as an exact rational")
    p.add_argument("--alpha", required=True, help="comma-separated rationals, e.g. 1,3/2")
    p.add_argument("--N", required=True, help="comma-separated nonnegative integers")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="corrected")
    common(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("table", help="tabulate values over {0..Nmax}^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", default="1", help="one rational (broadcast) or n of them")
    p.add_argument("--Nmax", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="corrected")
    p.add_argument("--format", choices=("json", "csv", "latex"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("poles", help="scan the box {0..Nmax}^n for polar points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--Nmax", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--cutoff", type=int, default=10_000)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache_path = getattr(args, "cache", None) or os.environ.get("MHZ_CACHE")
    if cache_path:
        arith.set_default_cache(arith.BernoulliCache(cache_path))
    try:
        return args.func(args)
    except (UsageError, PreconditionError, ValueError) as exc:
        sys.stderr.write(f"mhz: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
