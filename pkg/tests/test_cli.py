"""CLI subcommands: reports, scans, JSON output, determinism, error paths."""

import csv
import io
import json
import math

import pytest

from qecprobe.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- code-info -------------------------------------------------------------------

def test_code_info_rep3(capsys):
    code, out, _ = run_cli(capsys, "code-info", "--builtin", "repetition3")
    assert code == 0
    assert "distance: 1" in out
    assert "logical Z coset size: 4" in out
    assert "n(n-1)/2+1: 4 (matches enumeration)" in out

def test_code_info_five_flags_discrepancy(capsys):
    code, out, _ = run_cli(capsys, "code-info", "--builtin", "fivequbit")
    assert code == 0
    assert "distance: 3" in out
    assert "logical Z coset size: 16" in out
    assert "n(n-1)/2+1: 11" in out
    assert "DISCREPANCY" in out

def test_code_info_json(capsys):
    code, out, _ = run_cli(capsys, "code-info", "--builtin", "fivequbit", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["distance"] == 3
    assert data["logical_z_coset_size"] == 16
    assert data["redundancy_estimate"] == 11
    assert data["redundancy_discrepancy"] is True

def test_code_info_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.code"
    bad.write_text("n=3\ngen XII\ngen ZII\nlogical_x XXX\nlogical_z ZZZ\n")
    code, out, err = run_cli(capsys, "code-info", "--code-file", str(bad))
    assert code == 1
    assert out == ""
    assert "anticommute" in err

def test_code_file_loads(tmp_path, capsys):
    good = tmp_path / "rep.code"
    good.write_text("n=3\ngen ZZI\ngen IZZ\nlogical_x XXX\nlogical_z ZII\n")
    code, out, _ = run_cli(capsys, "code-info", "--code-file", str(good))
    assert code == 0
    assert "distance: 1" in out


# -- classify / coset / orbit / distance -----------------------------------------------

def test_classify_logical(capsys):
    code, out, _ = run_cli(capsys, "classify", "--builtin", "repetition3", "ZZZ")
    assert code == 0
    assert "logical_action +Z" in out
    assert "agreement: yes" in out

def test_classify_stabilizer(capsys):
    code, out, _ = run_cli(capsys, "classify", "--builtin", "fivequbit", "IXZZX")
    assert code == 0
    assert "stabilizer" in out

def test_classify_detectable(capsys):
    code, out, _ = run_cli(capsys, "classify", "--builtin", "fivequbit", "XIIII")
    assert code == 0
    assert "detectable" in out

def test_classify_parse_error(capsys):
    code, _, err = run_cli(capsys, "classify", "--builtin", "repetition3", "ZQZ")
    assert code == 1
    assert "position 1" in err

def test_coset_text(capsys):
    code, out, _ = run_cli(capsys, "coset", "--builtin", "repetition3", "--which", "Z")
    assert code == 0
    for word in ("ZII", "IZI", "IIZ", "ZZZ"):
        assert word in out
    assert "4 elements" in out

def test_coset_json(capsys):
    code, out, _ = run_cli(capsys, "coset", "--builtin", "fivequbit", "--which", "Z", "--format", "json")
    data = json.loads(out)
    assert data["size"] == 16

def test_orbit(capsys):
    code, out, _ = run_cli(capsys, "orbit", "--builtin", "fivequbit", "YZYII")
    assert code == 0
    assert out.count("logical_action -Z") == 5

def test_distance(capsys):
    code, out, _ = run_cli(capsys, "distance", "--builtin", "fivequbit")
    assert code == 0
    assert "distance: 3" in out


# -- experiment -----------------------------------------------------------------------------

def test_experiment_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "experiment", "--builtin", "repetition3", "--signal", "logicalZ-all",
        "--tau", "1", "--xi", "0.3926990817", "--shots", "10000", "--seed", "7",
    )
    assert code == 0
    data = json.loads(out)
    assert data["cr_bound"] == pytest.approx(1 / 6, rel=1e-6)
    assert data["kind"] == "noiseless"
    assert len(data["outcomes"]) == 10000

def test_experiment_zero_signal(capsys):
    code, out, _ = run_cli(
        capsys, "experiment", "--builtin", "repetition3", "--xi", "0", "--shots", "200",
    )
    data = json.loads(out)
    assert data["estimate"] == 0.0

def test_experiment_noise(capsys):
    code, out, _ = run_cli(
        capsys,
        "experiment", "--builtin", "repetition3", "--shots", "1000", "--seed", "3",
        "--noise-ops", "XII,IXI,IIX", "--noise-p", "0.01", "--cycles", "5",
    )
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "noisy"
    assert data["noise"]["probability"] == 0.01
    assert data["noise"]["cycles"] == 5

def test_experiment_custom_signal_terms(tmp_path, capsys):
    terms = tmp_path / "terms.txt"
    terms.write_text("# single logical term\n1.0 ZII\n")
    code, out, _ = run_cli(
        capsys,
        "experiment", "--builtin", "repetition3", "--signal-terms", str(terms),
        "--shots", "400", "--seed", "2",
    )
    data = json.loads(out)
    assert data["effective_coupling"] == 1.0
    assert data["cr_bound"] == pytest.approx(0.5, rel=1e-6)

def test_scan_m(capsys):
    code, out, _ = run_cli(capsys, "experiment", "--scan", "M", "--max-m", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [row["label"] for row in rows] == ["trivial", "repetition3", "fivequbit"]
    targets = (0.5, 1 / 6, 0.1)
    for row, target in zip(rows, targets):
        assert float(row["delta_xi_tau"]) == pytest.approx(target, rel=1e-6)

def test_scan_m_truncates(capsys):
    _, out, _ = run_cli(capsys, "experiment", "--scan", "M", "--max-m", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [row["label"] for row in rows] == ["trivial", "repetition3"]

def test_scan_n_sql(capsys):
    code, out, _ = run_cli(
        capsys, "experiment", "--scan", "N", "--shot-counts", "1,4,100", "--tau", "2.0"
    )
    rows = list(csv.DictReader(io.StringIO(out)))
    values = [float(row["delta_xi"]) for row in rows]
    assert values == pytest.approx([0.25, 0.125, 0.025])

def test_scan_p(capsys):
    code, out, _ = run_cli(
        capsys,
        "experiment", "--builtin", "repetition3", "--scan", "p",
        "--p-values", "0.01,0.02", "--shots", "1000", "--seed", "5",
        "--noise-ops", "XII,IXI,IIX", "--cycles", "5",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["p"]) for r in rows] == [0.01, 0.02]
    for row in rows:
        assert float(row["mean_ideal_infidelity"]) >= 0.0

def test_scan_p_requires_noise_ops(capsys):
    code, _, err = run_cli(
        capsys, "experiment", "--builtin", "repetition3", "--scan", "p",
    )
    assert code == 1
    assert "noise-ops" in err


# -- determinism through the CLI ------------------------------------------------------------------

def test_repeated_invocation_identical_json(tmp_path, capsys):
    args = (
        "experiment", "--builtin", "repetition3", "--shots", "2000", "--seed", "99",
    )
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()

def test_repeated_scan_identical_csv(tmp_path, capsys):
    args = (
        "experiment", "--builtin", "repetition3", "--scan", "p",
        "--p-values", "0.01", "--shots", "500", "--seed", "4",
        "--noise-ops", "XII,IXI,IIX", "--cycles", "3",
    )
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
