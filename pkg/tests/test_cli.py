"""Command-line interface tests: exit codes, JSON envelopes, and the
byte-deterministic sweep CSV / fit roundtrip."""

import csv
import json
import subprocess
import sys

import pytest

from bellmesh import cli


def run(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "bellmesh.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


def test_no_arguments_is_usage_error():
    proc = run([])
    assert proc.returncode == 2


def test_unknown_command_is_usage_error():
    proc = run(["frobnicate"])
    assert proc.returncode == 2


def test_bad_flag_value_is_usage_error():
    proc = run(["prep", "--eps", "0.7"])
    assert proc.returncode == 2


def test_version_flag():
    proc = run(["--version"])
    assert proc.returncode == 0


def test_prep_envelope(tmp_path):
    out = tmp_path / "prep.json"
    proc = run(["prep", "--eps", "0.00386", "--out", str(out)])
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "bellmesh/prep/1"
    assert "version" in doc and "config" in doc and "wall_time_s" in doc
    assert doc["result"]["node_error_rate"] == pytest.approx(0.022717, abs=5e-6)
    assert sum(doc["result"]["state"]) == pytest.approx(1.0, abs=1e-12)
    assert sum(doc["result"]["intermediate"]) == pytest.approx(1.0, abs=1e-12)


def test_gadget_verify_passes():
    proc = run(["gadget-verify", "--samples", "3"])
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema"] == "bellmesh/gadget-verify/1"
    rows = doc["result"]["table"]
    assert len(rows) == 16
    assert all(row["ok"] for row in rows)


def test_geometry_census():
    proc = run(["geometry", "--n", "9", "--kind", "to"])
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["vertices"] == 100
    assert doc["result"]["missing_vertices"] == 16


def test_geometry_rejects_bad_n():
    proc = run(["geometry", "--n", "8", "--kind", "to"])
    assert proc.returncode == 2


def test_decode_trace_explicit_edges():
    proc = run(["decode-trace", "--n", "9", "--kind", "te", "--edges", "0,5"])
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    result = doc["result"]
    assert result["errors"] == [0, 5]
    assert result["residual_membrane_parity"] in (0, 1)
    assert isinstance(result["failure"], bool)


def test_sweep_csv_is_byte_identical(tmp_path):
    args = ["sweep", "--kind", "x", "--p", "0.02", "--no", "1,2",
            "--trials", "2000", "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run([*args, "--out", str(a)]).returncode == 0
    assert run([*args, "--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_csv_columns(tmp_path):
    out = tmp_path / "sweep.csv"
    run(["sweep", "--p", "0.02", "--no", "1", "--trials", "500",
         "--seed", "0", "--out", str(out)])
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == cli.CSV_COLUMNS
    # Default runs both sublattices.
    assert {row["kind"] for row in rows} == {"to", "te"}
    for row in rows:
        est = float(row["estimate"])
        assert 0.0 <= est <= 1.0  # probabilities, never percentages


def test_sweep_fit_roundtrip(tmp_path):
    sweep_out = tmp_path / "sweep.csv"
    proc = run(["sweep", "--kind", "z", "--p", "0.03", "--no", "1,2,3,4",
                "--trials", "4000", "--seed", "5", "--out", str(sweep_out)])
    assert proc.returncode == 0
    fit_out = tmp_path / "fit.json"
    proc = run(["fit", "--input", str(sweep_out), "--out", str(fit_out)])
    assert proc.returncode == 0
    doc = json.loads(fit_out.read_text())
    fits = doc["result"]["fits"]
    assert len(fits) == 1
    fit = fits[0]
    assert fit["kind"] == "te" and fit["p"] == 0.03
    assert fit["sizes"] == [1, 2, 3, 4]
    assert 0.0 <= fit["f_infinity"] <= 1.0


def test_bounds_requires_p_or_solve():
    proc = run(["bounds"])
    assert proc.returncode == 2


def test_bounds_point_and_threshold():
    proc = run(["bounds", "--p", "0.001", "--solve-threshold"])
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    res = doc["result"]
    assert res["rigorous_threshold"] == pytest.approx(1.17e-3, rel=0.05)
    assert res["rigorous_epsilon_threshold"] == pytest.approx(1.95e-4, rel=0.05)
    assert res["bound_pX"] > res["bound_pZ"] > 0


def test_bounds_beyond_onset_is_rejected():
    # Divergent parameter domain is reported as a usage error.
    proc = run(["bounds", "--p", "0.02"])
    assert proc.returncode == 2
    assert "diverges" in proc.stderr


def test_main_is_importable_entry_point():
    assert cli.main(["prep", "--eps", "0.001"]) == 0
