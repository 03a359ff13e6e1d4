import json
import os
import subprocess
import sys

import pytest


def run(*args, env=None):
    full_env = dict(os.environ, **(env or {}))
    proc = subprocess.run([sys.executable, "-m", "stabtest", *args], capture_output=True, text=True, env=full_env)
    return proc.returncode, proc.stdout


def test_stabvalue_and_qnk():
    code, out = run("stabvalue", "--n", "2", "--K", "10")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "stabtest/1"
    assert doc["value_rational"] == "174251/327680"
    assert doc["value_float"] == pytest.approx(0.531772, abs=1e-6)
    code, out = run("qnk", "--n", "2")
    assert code == 0
    assert json.dumps(json.loads(out)).count("8/15") == 1
    assert "2/5" in out and "1/15" in out


def test_precondition_exit_code():
    code, out = run("test", "--state", "product:T^3", "--n", "3", "--epsilon", "0.3", "--delta", "0.05", "--seed", "7")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "PreconditionError"


def test_bad_input_exit_code():
    code, out = run("test", "--state", "nonsense", "--n", "3", "--epsilon", "0.5", "--seed", "1")
    assert code == 2 and "error" in json.loads(out)


def test_seed_is_required():
    proc = subprocess.run([sys.executable, "-m", "stabtest", "test", "--state", "stab:zero", "--n", "4", "--epsilon", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_accept_and_reject_exit_codes(tmp_path):
    code, out = run("test", "--state", "stab:zero", "--n", "4", "--epsilon", "0.5", "--delta", "0.1", "--seed", "3")
    assert code == 0 and json.loads(out)["decision"] == "stabilizer"
    code, out = run("test", "--state", "haar:0", "--n", "4", "--epsilon", "0.5", "--delta", "0.1", "--seed", "3")
    assert code == 1 and json.loads(out)["decision"] == "far"


def test_output_is_reproducible_across_workers(tmp_path):
    args = ["estimate", "--state", "stab:random:5", "--n", "3", "--K", "15", "--trials", "600", "--seed", "11"]
    a = run(*args, "--workers", "1")
    b = run(*args, "--workers", "2")
    c = run(*args, env={"STABTEST_WORKERS": "3"})
    assert a[0] == 0
    assert a[1] == b[1] == c[1]
    trace = tmp_path / "trace.csv"
    run(*args, "--trace", str(trace))
    assert len(trace.read_text().splitlines()) == 601


def test_file_state(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"n": 3, "amps": [[1, 0]] + [[0, 0]] * 7}))
    code, out = run("estimate", "--state", f"file:{path}", "--K", "15", "--trials", "200", "--seed", "1")
    assert code == 0
    assert json.loads(out)["n"] == 3


def test_commutant_commands(tmp_path):
    cat = tmp_path / "sigma.txt"
    code, out = run("commutant", "enumerate", "--t", "4", "--catalog", str(cat))
    doc = json.loads(out)
    assert code == 0 and doc["sigma_count"] == 30 and doc["orthogonal_count"] == 24
    assert len(cat.read_text().splitlines()) == 30
    code, out = run("commutant", "counterexample", "--n", "1", "--orbits", "2", "--seed", "0")
    assert code == 0


def test_verify_quick_suite():
    code, out = run("verify", "census", "--seed", "0", "--quick")
    doc = json.loads(out)
    assert code == 0
    assert all(r["passed"] for r in doc["results"])
    code, out = run("verify", "qlimit", "--seed", "0")
    assert code == 1
