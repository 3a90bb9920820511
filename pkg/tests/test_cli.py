"""Command-line interface: formats, exit codes, cross-checks."""

import csv
import io
import json

import pytest

import qudit_bell.cli as cli
from qudit_bell import noise_threshold, quantum_value


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- exit codes


def test_no_command_is_usage_error(capsys):
    code, _, _ = run(capsys, )
    assert code == 2


def test_unknown_command_is_usage_error(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_bad_dimension_values(capsys):
    for bad in ("1", "x", "0", "-3"):
        code, _, err = run(capsys, "bound", "-d", bad)
        assert code == 2
        assert "dimension" in err


def test_bad_range(capsys):
    code, _, err = run(capsys, "sweep", "-d", "5..3")
    assert code == 2
    assert "range" in err


def test_sweep_rejects_other_families(capsys):
    code, _, err = run(capsys, "sweep", "-d", "2..3", "--family", "I")
    assert code == 2


def test_bad_noise_p(capsys):
    code, _, err = run(capsys, "threshold", "-d", "3", "--noise-p", "1.5")
    assert code == 2
    assert "noise-p" in err


# ---------------------------------------------------------------- bound


def test_bound_table_output(capsys):
    code, out, _ = run(capsys, "bound", "-d", "3")
    assert code == 0
    assert "local bound = 2" in out
    assert "case analysis" in out


def test_bound_json_payload(capsys):
    code, out, _ = run(capsys, "bound", "-d", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["command"] == "bound"
    assert payload["local_bound"] == 2.0
    assert payload["bruteforce_value"] == 2.0
    assert payload["case_value"] == 2.0
    assert payload["attainable_values"][0] == 2.0


def test_bound_family_I(capsys):
    code, out, _ = run(capsys, "bound", "-d", "2", "--family", "I", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["local_bound"] == 3.0
    assert payload["case_value"] is None


def test_bound_cross_check_failure_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "local_bound_cases", lambda d: (2.5, {2.5}))
    code, _, err = run(capsys, "bound", "-d", "3")
    assert code == 3
    assert "cross-check" in err


def test_bound_beyond_cap_skips_bruteforce(capsys):
    code, out, _ = run(capsys, "bound", "-d", "60", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["bruteforce_value"] is None
    assert payload["local_bound"] == 2.0


# ---------------------------------------------------------------- quantum


def test_quantum_json(capsys):
    code, out, _ = run(capsys, "quantum", "-d", "3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["quantum_value_Id"] == quantum_value(3)
    shifts = [row["shift"] for row in payload["correlators"]]
    assert shifts == [0, -1, 1]
    values = [row["value"] for row in payload["correlators"]]
    assert values == sorted(values, reverse=True)


# ---------------------------------------------------------------- threshold


def test_threshold_verdicts(capsys):
    code, out, _ = run(capsys, "threshold", "-d", "3", "--noise-p", "0.9")
    assert code == 0
    assert "violated" in out
    code, out, _ = run(capsys, "threshold", "-d", "3", "--noise-p", "0.5", "--format", "json")
    assert code == 0
    assert json.loads(out)["verdict"] == "not violated"


def test_threshold_family_I_matches_Id_at_d2(capsys):
    code, out, _ = run(capsys, "threshold", "-d", "2", "--family", "I", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["noise_threshold"] == pytest.approx(noise_threshold(2), abs=1e-12)


# ---------------------------------------------------------------- sweep


def test_sweep_csv_contract(capsys):
    code, out, _ = run(capsys, "sweep", "-d", "2..5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d,local_bound,quantum_value,noise_threshold"
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert [r[0] for r in rows] == ["2", "3", "4", "5"]
    for row in rows:
        d = int(row[0])
        assert float(row[1]) == 2.0
        # repr floats round-trip exactly
        assert float(row[2]) == quantum_value(d)
        assert float(row[3]) == noise_threshold(d)


def test_sweep_cross_check_failure_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "local_bound_cases", lambda d: (1.9, {1.9}))
    code, _, err = run(capsys, "sweep", "-d", "2..3")
    assert code == 3
    assert "cross-check" in err


def test_sweep_single_dimension(capsys):
    code, out, _ = run(capsys, "sweep", "-d", "7", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 1 and rows[0]["d"] == 7


# ---------------------------------------------------------------- optimize


def test_optimize_writes_trace_and_reports(capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(
        capsys, "optimize", "-d", "2", "--budget", "600", "--restarts", "2",
        "--trace-out", str(trace), "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert trace.exists()
    assert payload["best_value"] <= payload["reference_value"] + 1e-6
    assert payload["trace_path"] == str(trace)
    header = trace.read_text().splitlines()[0]
    assert header == "evaluation_index,incumbent_value"


def test_optimize_default_trace_respects_env_dir(capsys, tmp_path, monkeypatch):
    out_dir = tmp_path / "runs"
    monkeypatch.setenv("QUDIT_BELL_OUTPUT_DIR", str(out_dir))
    code, out, _ = run(
        capsys, "optimize", "-d", "2", "--budget", "400", "--restarts", "2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["trace_path"] == str(out_dir / "optimize_trace_Id_d2.csv")
    assert (out_dir / "optimize_trace_Id_d2.csv").exists()


def test_optimize_validates_budget(capsys):
    code, _, err = run(capsys, "optimize", "-d", "2", "--budget", "0")
    assert code == 2


# ---------------------------------------------------------------- reproduce


def test_reproduce_all_pass(capsys):
    code, out, _ = run(capsys, "reproduce")
    assert code == 0
    lines = [line for line in out.strip().splitlines() if "PASS" in line or "FAIL" in line]
    assert len(lines) >= 7  # six rows plus the summary line
    assert "FAIL" not in out


def test_reproduce_json_rows(capsys):
    code, out, _ = run(capsys, "reproduce", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_pass"] is True
    names = {row["name"] for row in payload["rows"]}
    assert "Id_quantum_value_limit" in names
    for row in payload["rows"]:
        assert row["status"] == "PASS"
        assert row["relative_error"] <= 5e-5


def test_reproduce_detects_regression(capsys, monkeypatch):
    monkeypatch.setattr(cli, "quantum_value", lambda d: 2.5)
    code, out, _ = run(capsys, "reproduce")
    assert code == 3
    assert "FAIL" in out


# ---------------------------------------------------------------- output file


def test_output_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "bound", "-d", "3", "--format", "json", "--output", str(target)
    )
    assert code == 0
    assert str(target) in out
    assert json.loads(target.read_text())["local_bound"] == 2.0
