import io
import json
import subprocess
import sys

import pytest

from serre_pairs.cli import RunConfig, build_parser, main, run
from serre_pairs.entanglement import PairVerdict


def invoke(*argv):
    """Run in-process and capture the report."""
    buf = io.StringIO()
    args = build_parser().parse_args(list(argv))
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    code = run(RunConfig(**fields), out=buf)
    return code, buf.getvalue()


def test_verify_pair_json_exit_0():
    code, out = invoke("verify-pair", "--l", "3", "--l", "5", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["serre_pair"] is True
    assert PairVerdict.from_dict(d).to_dict() == d


def test_verify_pair_identical_exit_1():
    code, out = invoke("verify-pair", "--l", "3", "--l", "3")
    assert code == 1 and "[FAIL] coprime-discriminants" in out


def test_search_partner_prints_5():
    code, out = invoke("search-partner", "--l", "3", "--count", "1")
    assert (code, out) == (0, "5\n")


def test_verify_ktuple():
    code, out = invoke("verify-ktuple", "--l", "3", "--l", "5", "--l", "11", "--json")
    assert code == 0 and json.loads(out)["expected_index"] == 8


def test_model_with_attestation():
    code, _ = invoke("verify-pair", "--l", "3", "--model", "0,0,0,-1,0")
    assert code == 1
    code, out = invoke("verify-pair", "--l", "3", "--model", "0,0,0,-1,0", "--assert-serre", "--json")
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert checks["serre-curve-E2"]["pass"] and "user-asserted" in checks["serre-curve-E2"]["witness"]


def test_frobenius_scan_lines():
    code, out = invoke("frobenius-scan", "--l", "3", "--n", "5", "--qmax", "30")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [x["q"] for x in lines] == [7, 11, 13, 17, 19, 23, 29]
    assert all(x["det"] == x["q"] % 5 for x in lines)


def test_goursat_demo():
    code, out = invoke("goursat-demo", "--n", "3", "--json")
    d = json.loads(out)
    assert code == 0
    assert d["orders"] == {"GL2": 48, "SL2": 24, "D_n": 1152}
    assert d["d_n_goursat"]["quotient"] == 2
    code, out = invoke("goursat-demo", "--n", "5")
    assert "SL2(Z/5)" in out and "index     60" in out


def test_coverage_flag():
    code, out = invoke("verify-pair", "--l", "3", "--l", "5", "--coverage", "--qmax", "3000", "--json")
    assert code == 0 and set(json.loads(out)["coverage"]) == {"4", "5", "9"}


def test_deterministic_output():
    argv = ["verify-pair", "--l", "3", "--l", "5", "--json", "--coverage", "--qmax", "1000"]
    assert invoke(*argv) == invoke(*argv)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-pair", "--l", "3"],
        ["verify-pair", "--l", "x", "--l", "5"],
        ["verify-pair", "--l", "7", "--l", "5"],
        ["verify-pair", "--l", "3", "--l", "5", "--pmax", "0"],
        ["search-partner", "--model", "1,0,0,0,3"],
        ["frobenius-scan", "--model", "1,0,0"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "serre_pairs", "search-partner", "--l", "5", "--count", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.split() == ["3", "11", "13"]
