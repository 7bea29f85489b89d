import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from tdlc_entropy import verify as verify_mod
from tdlc_entropy.cli import main
from tdlc_entropy.exact import EntropyValue
from tdlc_entropy.padic import PAdicUniverse
from tdlc_entropy.verify import CheckResult

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    return code, capsys.readouterr().out


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return path


def test_run_entropy_json(capsys):
    code, out = run(capsys, "run", "--instance", INSTANCES / "padic_swap.json")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["value"] == "log(5)"
    assert ["oracle:padic", "agree"] in result["cross_checks"]
    assert set(result["algorithms"]) == {"limit", "limitfree", "corollary"}


@pytest.mark.parametrize("name, value", [
    ("padic_swap_modulus", "2"),
    ("shift_scale", "1"),
    ("finite_automorphism", "0"),
    ("product_global", "log(6)"),
])
def test_worked_instances(capsys, name, value):
    code, out = run(capsys, "run", "--instance", INSTANCES / f"{name}.json")
    assert code == 0
    assert json.loads(out)["result"]["value"] == value


def test_op_override_and_table_format(capsys):
    code, out = run(capsys, "run", "--instance", INSTANCES / "padic_diagonal.json", "--op", "modulus",
                    "--format", "table")
    assert code == 0 and "oracle:determinant" in out


def test_invalid_instances_exit_2(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"universe": {"kind": "padic", "p": 5, "dim": 1},
                                      "automorphism": {"kind": "matrix", "rows": [["1/0"]]}})
    code, out = run(capsys, "run", "--instance", bad)
    assert code == 2 and json.loads(out)["error"] == "InvalidInstance"
    flt = write(tmp_path, "flt.json", '{"universe": {"kind": "padic", "p": 5, "dim": 1}, '
                                      '"automorphism": {"kind": "matrix", "rows": [[0.5]]}}')
    assert run(capsys, "run", "--instance", flt)[0] == 2


def test_not_stabilized_exits_3_with_partial_trace(capsys, tmp_path):
    code, out = run(capsys, "run", "--instance", INSTANCES / "padic_swap.json", "--max-steps", 3, "--window", 4)
    assert code == 3
    assert json.loads(out)["partial_trace"]
    csv_path = tmp_path / "t.csv"
    code, _ = run(capsys, "trace", "--instance", INSTANCES / "padic_swap.json", "--max-steps", 3,
                  "--window", 4, "--trace-out", csv_path)
    assert code == 3
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "n,c_n,alpha_n,d_index" and lines[-1] == "# INCOMPLETE"


def test_oracle_mismatch_exits_4(capsys, monkeypatch):
    monkeypatch.setattr(PAdicUniverse, "entropy_oracle", lambda self, phi, U: EntropyValue.log_of(7))
    code, out = run(capsys, "run", "--instance", INSTANCES / "padic_swap.json")
    assert code == 4 and json.loads(out)["error"] == "CrossCheckMismatch"


def test_failing_verify_exits_5_and_writes_witness(capsys, monkeypatch, tmp_path):
    def broken(gen, count):
        check = CheckResult("loglaw", "broken")
        check.record(False, "forced", lambda: {"op": "entropy"})
        return [check]

    monkeypatch.setitem(verify_mod._SUITE_FUNCS, "loglaw", broken)
    code, out = run(capsys, "verify", "--suite", "loglaw", "--witness-dir", tmp_path)
    assert code == 5 and "FAIL loglaw/broken" in out
    assert json.loads((tmp_path / "loglaw-broken.json").read_text()) == {"op": "entropy"}


def test_verify_passes_and_is_deterministic(capsys):
    a = run(capsys, "verify", "--suite", "antitone", "--count", 5, "--seed", 3, "--format", "json")
    b = run(capsys, "verify", "--suite", "antitone", "--count", 5, "--seed", 3, "--format", "json")
    assert a[0] == 0 and a == b
    assert json.loads(a[1])["passed"]


def test_trace_csv(capsys, tmp_path):
    code, out = run(capsys, "trace", "--instance", INSTANCES / "padic_swap.json", "--window", 3)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,c_n,alpha_n,d_index"
    assert lines[1].split(",")[:3] == ["1", "1", "5"]
    target = tmp_path / "trace.csv"
    assert run(capsys, "trace", "--instance", INSTANCES / "padic_swap.json", "--window", 3,
               "--trace-out", target)[0] == 0
    assert target.read_text() == out


def test_batch(capsys, tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    for name in ("padic_swap", "shift_sigma"):
        shutil.copy(INSTANCES / f"{name}.json", src)
    code, out = run(capsys, "batch", src, "--jobs", 2)
    assert code == 0 and "pass=2" in out
    assert sorted(p.name for p in (src / "reports").iterdir()) == [
        "padic_swap.report.txt", "shift_sigma.report.txt"]
    write(src, "zz_bad.json", "{")
    code, out = run(capsys, "batch", src, "--format", "json", "--out", tmp_path / "out")
    assert code == 2
    summary = json.loads(out)
    assert summary["total"] == 3 and summary["counts"]["invalid"] == 1
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run(capsys, "batch", empty)[0] == 0
    assert run(capsys, "batch", tmp_path / "nope")[0] == 2


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "tdlc_entropy", "run", "--instance", str(INSTANCES / "padic_diagonal.json")]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and json.loads(first)["result"]["value"] == "log(5)"
