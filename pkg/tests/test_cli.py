import csv
import io
import json
import subprocess
import sys

import pytest

from leibniz_lab.cli import emit_report, run
from leibniz_lab.harness import run_suite


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip(text):
    d = json.loads(text)
    d.pop("runtime_ms")
    d.pop("tool_version")
    return d


def test_verify_leibniz(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "leibniz", "--n", "6", "--norm", "p=3",
                        "--trials", "10000", "--seed", "42")
    assert code == 0
    rep = json.loads(out)
    assert rep["min_slack"] >= -1e-9 and rep["violations"] == 0 and rep["seed"] == 42


def test_reproduce_exit_codes(capsys):
    code, out, _ = call(capsys, "reproduce", "--case", "cs-bimodule-l1")
    rep = json.loads(out)
    assert code == 1 and rep["holds"] is True and rep["violations"] == 1
    code, out, _ = call(capsys, "reproduce", "--case", "prop21-identity")
    assert code == 0


def test_eval_sigma_p(capsys):
    code, out, _ = call(capsys, "eval", "--op", "sigma_p", "--f", "[1,-1]", "--mu", "[0.5,0.5]",
                        "--p", "2")
    assert code == 0 and out.strip() == "1"


def test_eval_ops(capsys):
    assert call(capsys, "eval", "--op", "norm", "--norm", "kfan=2", "--f", "[3,-1,2]")[1].strip() == "5"
    assert call(capsys, "eval", "--op", "sort_abs_desc", "--f", "[3,-1,2]")[1].strip() == "[3.0, 2.0, 1.0]"
    assert json.loads(call(capsys, "eval", "--op", "theta", "--f", "[1,3]")[1]) == [[-1, 1], [1, -1]]
    code, out, _ = call(capsys, "eval", "--op", "bimodule", "--norm", "p=1", "--f", "[1,-1,1,1,1]",
                        "--g", "[1,-1,0,0,0]", "--h", "[1,-1,1,1,1]")
    assert code == 1 and json.loads(out)["lhs"] == pytest.approx(2.4)
    code, out, _ = call(capsys, "eval", "--op", "opnorm", "--norm", "kfan=2", "--matrix",
                        "[[1,0,0],[0,1,0],[0,0,1]]")
    assert code == 0 and float(out) == pytest.approx(1.0)


def test_matrix_from_file(capsys, tmp_path):
    path = tmp_path / "delta.json"
    path.write_text("[[-2,1,1],[1,-1,0],[1,0,-1]]")
    code, out, _ = call(capsys, "eval", "--op", "strong-leibniz", "--norm", "p=inf",
                        "--f", "[-0.1,0.1,-0.2]", "--matrix", f"@{path}")
    assert code == 1
    assert json.loads(out)["slack"] == pytest.approx(-5)


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "bogus"],
    ["verify", "--suite", "leibniz", "--unknown", "1"],
    ["verify"],
    [],
    ["eval", "--op", "norm", "--norm", "kfan=9", "--f", "[1,2]"],
    ["eval", "--op", "norm", "--norm", "p=2", "--f", "@/nonexistent/file.json"],
    ["eval", "--op", "norm", "--norm", "p=2", "--f", "[1,"],
    ["eval", "--op", "leibniz", "--norm", "p=2", "--f", "[1,2]", "--g", "[1,2,3]"],
    ["eval", "--op", "sigma_p", "--f", "[1,2]", "--mu", "[0.5,0.6]"],
    ["search", "--target", "leibniz", "--norm", "p=2"],
    ["verify", "--suite", "kato-ponce", "--matrix", "[[1,-1],[-1,1]]"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = call(capsys, *argv)
    assert code == 2


def test_mu_normalized_within_tolerance(capsys):
    code, out, _ = call(capsys, "eval", "--op", "expectation", "--f", "[4,0]",
                        "--mu", "[0.25,0.7500000001]")
    assert code == 0 and float(out) == pytest.approx(1.0)


def test_json_output_is_deterministic(capsys):
    argv = ["search", "--target", "strong-leibniz", "--n", "4", "--norm", "p=3", "--trials",
            "2000", "--seed", "5"]
    a = call(capsys, *argv)[1]
    b = call(capsys, *argv)[1]
    assert _strip(a) == _strip(b)
    ja, jb = json.loads(a), json.loads(b)
    for d in (ja, jb):
        d["runtime_ms"] = d["tool_version"] = None
    assert json.dumps(ja) == json.dumps(jb)


def test_out_and_csv(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, stdout, _ = call(capsys, "verify", "--suite", "leibniz", "--n", "3", "--trials", "50",
                           "--format", "csv", "--out", str(out))
    assert code == 0 and stdout == ""
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["case", "lhs", "rhs", "slack", "holds", "seed", "trial"]
    assert len(rows) == 1 + 5 + 3


def test_emit_report_three_records():
    rep = run_suite("leibniz", 3, 20, norms=["p=1", "p=2", "p=inf"])
    buf = io.StringIO()
    sys_stdout, sys.stdout = sys.stdout, buf
    try:
        emit_report(rep, "csv")
    finally:
        sys.stdout = sys_stdout
    lines = buf.getvalue().strip().splitlines()
    assert len(lines) == 4


def test_emit_report_unwritable(tmp_path):
    rep = run_suite("leibniz", 3, 5)
    with pytest.raises(OSError):
        emit_report(rep, "json", str(tmp_path / "missing" / "r.json"))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "leibniz_lab", "eval", "--op", "sigma_p", "--f",
                           "[1,-1]", "--mu", "[0.5,0.5]", "--p", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
