import json
import re
from pathlib import Path

import pytest

from hopf3.cli import main
from hopf3.pipelines import verify_report
from hopf3.sysmodel import serialize_system
from hopf3.catalog import catalog_instantiate


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main(list(argv) + ["--out", str(out)])
    return code, out


def read_report(out):
    return json.loads((out / "report.json").read_text())


def test_rank_command(tmp_path):
    code, out = run(tmp_path, "rank", "--system", "rossler", "--set", "c=-1",
                    "--n", "11", "--jet", "1")
    assert code == 0
    summary = (out / "summary.txt").read_text()
    assert "rank = 3" in summary
    report = read_report(out)
    assert report["result"]["rank"] == 3


def test_verify_center_command(tmp_path):
    code, out = run(tmp_path, "verify-center", "--system", "jerk",
                    "--condition", "g", "--set", "a1=2", "--n", "6")
    assert code == 0
    assert "L1..L6 = 0" in (out / "summary.txt").read_text()


def test_cyclicity_command_lorenz(tmp_path):
    code, out = run(tmp_path, "cyclicity", "--system", "lorenz", "--set",
                    "a=-1,b=5,d=2", "--n", "4", "--jet", "2")
    assert code == 0
    report = read_report(out)
    assert report["result"]["lower_bound"] == 4
    ok, issues = verify_report(report["result"])
    assert ok, issues
    assert "certified lower bound: 4" in (out / "summary.txt").read_text()


def test_compute_from_file(tmp_path):
    system = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    path = tmp_path / "sys.json"
    path.write_text(serialize_system(system))
    code, out = run(tmp_path, "compute", "--file", str(path), "--n", "3")
    assert code == 0
    report = read_report(out)
    assert report["result"]["sequence"]["constants"][0]["jet"] == {}


def test_unknown_system_exit_code(tmp_path, capsys):
    code, out = run(tmp_path, "rank", "--system", "nosuch")
    assert code == 1
    err = json.loads((out / "error.json").read_text())
    assert err["error"]["code"] == "unknown-system"


def test_unknown_condition_exit_code(tmp_path):
    code, out = run(tmp_path, "verify-center", "--system", "jerk",
                    "--condition", "zz")
    assert code == 1
    err = json.loads((out / "error.json").read_text())
    assert err["error"]["code"] == "unknown-condition"


def test_decimal_input_rejected(tmp_path):
    code, out = run(tmp_path, "rank", "--system", "rossler", "--set", "c=0.5")
    assert code == 1
    err = json.loads((out / "error.json").read_text())
    assert err["error"]["code"] == "decimal-input"


def test_malformed_file_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run(tmp_path, "compute", "--file", str(bad))
    assert code == 1
    err = json.loads((out / "error.json").read_text())
    assert err["error"]["code"] == "format-error"


def test_inadmissible_parameters_exit_code(tmp_path):
    code, out = run(tmp_path, "rank", "--system", "lorenz", "--set",
                    "a=-2,b=18,d=1", "--jet", "1", "--n", "2")
    assert code == 1
    err = json.loads((out / "error.json").read_text())
    assert err["error"]["code"] == "sigma-irrational"


def strip_timestamp(report_text):
    data = json.loads(report_text)
    data["header"].pop("timestamp")
    return json.dumps(data, sort_keys=True)


def test_reports_byte_identical_modulo_timestamp(tmp_path):
    code1, out1 = run(tmp_path / "a", "rank", "--system", "rossler", "--set",
                      "c=-1", "--n", "5", "--jet", "1")
    code2, out2 = run(tmp_path / "b", "rank", "--system", "rossler", "--set",
                      "c=-1", "--n", "5", "--jet", "1")
    assert code1 == code2 == 0
    t1 = (out1 / "report.json").read_text()
    t2 = (out2 / "report.json").read_text()
    assert strip_timestamp(t1) == strip_timestamp(t2)
    # the timestamp lives in the header only
    assert json.loads(t1)["result"] == json.loads(t2)["result"]


def test_oracle_command(tmp_path):
    code, out = run(tmp_path, "oracle", "--system", "moonrand", "--set",
                    "mu=1,b=2,c=1,a=1", "--n", "2", "--rho", "1/20,1/10",
                    "--tol", "1e-11")
    assert code == 0
    report = read_report(out)
    assert report["result"]["verdict"]["verdict"] == "consistent"
    csv = (out / "displacement.csv").read_text()
    assert csv.splitlines()[0] == "rho0,delta_rho,settle_turns,tol"
    assert len(csv.splitlines()) == 3


def test_batch_mode(tmp_path, monkeypatch):
    monkeypatch.setenv("HOPF3_THREADS", "2")
    configs = [
        {"command": "rank", "system": "rossler", "set": ["c=-1"], "n": 4,
         "jet": 1},
        {"command": "verify-center", "system": "moonrand",
         "set": ["mu=1,b=2,c=1"], "n": 3},
    ]
    cfg = tmp_path / "batch.json"
    cfg.write_text(json.dumps(configs))
    code = main(["batch", str(cfg), "--out", str(tmp_path / "runs")])
    assert code == 0
    assert (tmp_path / "runs" / "run-000" / "report.json").exists()
    assert (tmp_path / "runs" / "run-001" / "report.json").exists()
