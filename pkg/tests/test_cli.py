import csv
import io
import json
import subprocess
import sys

import pytest

from sacq.boolfn import parse_function, write_truth_table_file
from sacq.cli import main, report_payload


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_bent(capsys):
    code, out, _ = run(capsys, "analyze", "--anf", "x1*x2 + x3*x4")
    assert code == 0
    assert "verdict SAC" in out and "epsilon 0" in out


def test_analyze_x1(capsys):
    code, out, _ = run(capsys, "analyze", "--anf", "x1", "--n", "2")
    assert code == 0
    assert "not SAC" in out and "epsilon 4" in out


def test_analyze_json_halves(capsys):
    code, out, _ = run(capsys, "analyze", "--anf", "x1*x2 + x3*x4", "--format", "json")
    data = json.loads(out)
    assert all(r["spectral_half_w_i_0"] == 0.5 == r["spectral_half_w_i_1"]
               for r in data["per_direction"])


def test_analyze_file_and_hex(capsys, tmp_path, bent4):
    p = tmp_path / "f.tt"
    write_truth_table_file(bent4, p, hex_form=True)
    _, a, _ = run(capsys, "analyze", "--fn-file", str(p), "--format", "json")
    _, b, _ = run(capsys, "analyze", "--hex", bent4.to_hex(), "--format", "json")
    _, c, _ = run(capsys, "analyze", "--bits", bent4.to_bits(), "--format", "json")
    assert a == b == c


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "analyze", "--anf", "x1 + * x2")
    assert code == 2 and "column 6" in err
    code, _, _ = run(capsys, "analyze", "--bits", "011")
    assert code == 2


def test_two_sources_exit_2(capsys):
    code, _, _ = run(capsys, "analyze", "--anf", "x1", "--bits", "01")
    assert code == 2


def test_size_limit_exit_3(capsys):
    code, _, _ = run(capsys, "analyze", "--anf", "x30")
    assert code == 3
    code, _, _ = run(capsys, "estimate", "--anf", "x15", "--algorithm", "qsac", "--shots", "5")
    assert code == 3


def test_estimate_qsac_bent_planned(capsys):
    code, out, _ = run(capsys, "estimate", "--anf", "x1*x2 + x3*x4", "--algorithm", "qsac",
                       "--plan", "0.05,0.05", "--seed", "11")
    assert code == 0
    rep = json.loads(out)
    assert rep["aggregate"]["m"] == 738
    assert set(rep) >= {"manifest", "per_direction", "aggregate", "intervals", "verdict"}
    assert rep["manifest"]["seed"] == 11 and rep["manifest"]["algorithm"] == "QSAC"


def test_estimate_classical_exhaustive(capsys):
    code, out, _ = run(capsys, "estimate", "--anf", "x1", "--n", "2", "--algorithm",
                       "classical", "--exhaustive")
    assert code == 0
    assert json.loads(out)["aggregate"]["epsilon_estimate"] == 4


def test_estimate_direct_sac(capsys):
    code, out, _ = run(capsys, "estimate", "--anf", "x1*x2 + x3*x4", "--algorithm", "direct",
                       "--shots", "10000")
    rep = json.loads(out)
    assert all(d["counts"][0] == 0 for d in rep["per_direction"])
    assert rep["verdict"]["sac_consistent"] is True


def test_estimate_csv(capsys):
    _, out, _ = run(capsys, "estimate", "--anf", "x1*x2 + x3", "--algorithm", "qsac",
                    "--shots", "100", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["i"] for r in rows] == ["1", "2", "3"]


def test_estimate_needs_size(capsys):
    code, _, _ = run(capsys, "estimate", "--anf", "x1*x2", "--algorithm", "qsac")
    assert code == 2


def test_rerun_byte_identical(capsys, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = ["estimate", "--anf", "x1*x2 + x2*x3 + x1", "--algorithm", "qsac", "--shots", "333",
            "--seed", "0xdeadbeef"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(["rerun", str(out1), "--out", str(out2)]) == 0
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert json.dumps(report_payload(a), sort_keys=True) == json.dumps(report_payload(b),
                                                                      sort_keys=True)
    assert main(["rerun", str(out1), "--check"]) == 0


def test_rerun_detects_tampering(capsys, tmp_path):
    p = tmp_path / "a.json"
    main(["estimate", "--anf", "x1*x2", "--algorithm", "classical", "--shots", "50",
          "--out", str(p)])
    rep = json.loads(p.read_text())
    rep["aggregate"]["epsilon_estimate"] = 123.0
    p.write_text(json.dumps(rep))
    assert main(["rerun", str(p), "--check"]) == 4


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "--t", "0.05", "--delta", "0.05", "--n", "8",
                       "--format", "json")
    data = json.loads(out)
    assert data["plans"]["QSAC"]["8"] == 738
    assert data["plans"]["CLASSICAL"]["8"] == 377742


def test_plan_qsac_constant_across_n(capsys):
    _, out, _ = run(capsys, "plan", "--t", "0.05", "--delta", "0.05", "--n", "2", "5", "12",
                    "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1][1:] == ["738", "738", "738"]


def test_plan_rejects_delta_one(capsys):
    code, _, _ = run(capsys, "plan", "--t", "0.05", "--delta", "1")
    assert code == 2


def test_table_text(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    for name in ("Classical", "QSAC", "Direct", "Forrelation", "Autocorrelation"):
        assert name in out


def test_table_csv_qubits(capsys):
    _, out, _ = run(capsys, "table", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["qubits_value"] for r in rows] == ["-", "5", "5", "5", "11"]


def test_audit_and_bound(capsys):
    code, out, _ = run(capsys, "audit", "--anf", "x1*x2 + x3*x4")
    assert code == 0 and "MISMATCH" not in out
    code, out, _ = run(capsys, "bound")
    assert json.loads(out)["holds"] is True


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sacq.cli", "analyze", "--bits", "0110"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "not SAC" in proc.stdout
