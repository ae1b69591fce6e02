import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from mhz import arith
from mhz.arith import parse_rational
from mhz.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_value_examples(capsys):
    code, out, _ = run(capsys, "value", "--alpha", "1", "--N", "0")
    assert code == 0
    assert json.loads(out)["value"] == "-1/2"
    code, out, _ = run(capsys, "value", "--alpha", "1,1", "--N", "0,0")
    assert code == 0
    assert out == '{"n":2,"alpha":["1","1"],"N":[0,0],"variant":"corrected","polar":false,"value":"-1/6","term_count":7}\n'


@pytest.mark.parametrize(
    "argv",
    [
        ("value", "--alpha", "0", "--N", "0"),
        ("value", "--alpha", "1.5", "--N", "0"),
        ("value", "--alpha", "1,2", "--N", "0"),
        ("value", "--alpha", "1", "--N", "-1"),
        ("value", "--alpha", "1", "--N", "0", "--variant", "bogus"),
        ("table", "--n", "1", "--Nmax", "-1"),
        ("nonsense",),
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(list(argv)))
    assert exc.value.code == 1


def test_value_paper_variant(capsys):
    code, out, _ = run(capsys, "value", "--alpha", "2,2", "--N", "0,1", "--variant", "paper")
    assert code == 0
    doc = json.loads(out)
    assert doc["variant"] == "paper"
    _, out2, _ = run(capsys, "value", "--alpha", "2,2", "--N", "0,1")
    assert json.loads(out2)["value"] != doc["value"]


def test_pole_exit_code(capsys, monkeypatch):
    import mhz.cli as cli
    from mhz.evaluators import EvalReport
    from mhz.indexsets import AlphaVec, Variant

    def fake(alpha, N, variant):
        return EvalReport(len(N), AlphaVec.of(alpha), tuple(N), Variant.parse(variant), None, True, (0,), 0)

    monkeypatch.setattr(cli, "zeta_value", fake)
    code, out, _ = run(capsys, "value", "--alpha", "1,1", "--N", "0,0")
    assert code == 2
    doc = json.loads(out)
    assert doc["polar"] is True and doc["value"] is None and doc["witness"] == [0]


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--n", "1", "--alpha", "1", "--Nmax", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["N1", "value"], ["0", "-1/2"], ["1", "-1/12"], ["2", "0"], ["3", "1/120"]]
    assert out.endswith("\r\n")


def test_table_json_broadcast(capsys):
    code, out, _ = run(capsys, "table", "--n", "2", "--alpha", "1", "--Nmax", "1", "--format", "json")
    doc = json.loads(out)
    assert [c["N"] for c in doc["cells"]] == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert doc["cells"][0]["value"] == "-1/6"
    for c in doc["cells"]:
        parse_rational(c["value"])


def test_table_single_row_and_latex(capsys):
    _, out, _ = run(capsys, "table", "--n", "1", "--Nmax", "0", "--format", "csv")
    assert out.splitlines() == ["N1,value", "0,-1/2"]
    _, out, _ = run(capsys, "table", "--n", "1", "--Nmax", "1", "--format", "latex")
    assert r"\toprule" in out and r"\bottomrule" in out
    assert r"0 & $-\frac{1}{2}$ \\" in out


def test_table_parallel_matches_serial(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "table", "--n", "2", "--alpha", "1,3/2", "--Nmax", "2", "--out", str(a))
    run(capsys, "table", "--n", "2", "--alpha", "1,3/2", "--Nmax", "2", "--jobs", "4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("n,Nmax", [(1, 10), (2, 6)])
def test_poles_none_found(capsys, n, Nmax):
    code, out, _ = run(capsys, "poles", "--n", str(n), "--Nmax", str(Nmax))
    assert code == 0
    assert out.splitlines()[-1] == "none found"


def test_poles_regression_fixture(capsys):
    _, out, _ = run(capsys, "poles", "--n", "3", "--Nmax", "4")
    assert out == (FIXTURES / "poles_n3_Nmax4.txt").read_text()


@pytest.mark.parametrize("suite", ["special", "oracle", "variants"])
def test_verify_suites_pass(capsys, tmp_path, suite):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", suite, "--out", str(report))
    assert code == 0
    assert out == f"{suite}: PASS\n"
    doc = json.loads(report.read_text())
    assert doc["pass"] is True
    if suite == "variants":
        assert doc["suites"]["variants"]["detail"]["consistent_variant"] == "corrected"


def test_verify_failure_exit_3(capsys, monkeypatch):
    import mhz.cli as cli

    monkeypatch.setattr(cli, "run_suite", lambda name, seed, tol: (False, []))
    code, _, err = run(capsys, "verify", "special")
    assert code == 3
    assert "special" in err


def test_cache_option(capsys, tmp_path):
    path = tmp_path / "cache.tsv"
    try:
        code, _, _ = run(capsys, "--cache", str(path), "value", "--alpha", "1", "--N", "6")
        assert code == 0
        assert path.read_text().splitlines()[6] == "6\t1/42"
    finally:
        arith.set_default_cache(arith.BernoulliCache())


def test_output_byte_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "mhz", "table", "--n", "2", "--alpha", "1/2,2", "--Nmax", "2", "--format", "csv"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    rows = list(csv.reader(io.StringIO(first.decode())))[1:]
    for row in rows:
        assert isinstance(parse_rational(row[-1]), F)
