# test_commands.py
"""
命令列子命令的端到端測試
"""

import io
import json

import pytest

from core.constants import EXIT_INVALID_CONFIG, EXIT_IO_FAILURE, EXIT_OK, SCALING_CSV_HEADER
from manage import main


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


@pytest.fixture
def ghz3(tmp_path):
    path = tmp_path / "ghz3.json"
    assert run("reference", "--name", "ghz", "--n", 3, "--out", path)[0] == EXIT_OK
    return path


def test_reference_file(ghz3):
    payload = json.loads(ghz3.read_text(encoding="utf-8"))
    assert payload["n"] == 3
    assert payload["meta"]["name"] == "ghz"


def test_mpe_and_ge(ghz3):
    code, out = run("mpe", "--state", ghz3, "--chi", 1, "--restarts", 3)
    assert code == EXIT_OK
    assert float(out) == pytest.approx(1.0, abs=1e-8)
    code, out = run("ge", "--state", ghz3, "--restarts", 5)
    assert code == EXIT_OK
    assert float(out) == pytest.approx(1.0, abs=1e-8)


def test_nlf(tmp_path, ghz3):
    basis = tmp_path / "000.json"
    run("reference", "--name", "basis", "--bits", "000", "--out", basis)
    code, out = run("nlf", "--state", ghz3, "--other", basis)
    assert code == EXIT_OK
    assert float(out) == pytest.approx(1.0, abs=1e-12)


def test_circuit_round_trip(tmp_path, ghz3):
    circuit = tmp_path / "c.json"
    code, out = run("fit-circuit", "--state", ghz3, "--depth", 1, "--restarts", 3, "--out", circuit)
    assert code == EXIT_OK
    assert float(out) == pytest.approx(0.0, abs=1e-6)

    mps = tmp_path / "mps.json"
    assert run("to-mps", "--circuit", circuit, "--out", mps)[0] == EXIT_OK
    rebuilt = tmp_path / "c2.json"
    assert run("to-circuit", "--mps", mps, "--out", rebuilt)[0] == EXIT_OK
    assert json.loads(rebuilt.read_text(encoding="utf-8"))["depth"] == 1


def test_rps_and_page(tmp_path):
    path = tmp_path / "rps.json"
    assert run("rps", "--n", 4, "--sigma", 0.5, "--seed", 7, "--out", path)[0] == EXIT_OK
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["meta"]["sigma"] == 0.5
    code, out = run("page", "--n", 4, "--samples", 5)
    assert code == EXIT_OK
    assert out.startswith("mean=")


def test_scan_then_table(tmp_path):
    csv_path = tmp_path / "scan.csv"
    report = tmp_path / "report.json"
    code, _ = run("scan", "--n", 4, "--depths", "1", "--chis", "1,2",
                  "--sigma-grid", "0.5,1,2,4", "--seeds", 1,
                  "--mpe-restarts", 2, "--fit-restarts", 2,
                  "--out-csv", csv_path, "--out-report", report)
    assert code == EXIT_OK
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(SCALING_CSV_HEADER)
    assert len(lines) == 1 + 4 * 2
    assert json.loads(report.read_text(encoding="utf-8"))["n_records"] == 8

    code, out = run("table", "--from-csv", csv_path)
    assert code == EXIT_OK
    rows = out.splitlines()
    assert rows[0].startswith("D\t")
    assert rows[1].startswith("1\t")


def test_depth_study(tmp_path):
    out_path = tmp_path / "study.json"
    code, out = run("depth-study", "--n", 4, "--chi", 2, "--depths", "1,2", "--samples", 1,
                    "--restarts", 2, "--out", out_path)
    assert code == EXIT_OK
    rows = json.loads(out_path.read_text(encoding="utf-8"))
    assert {row["depth"] for row in rows} == {1, 2}
    assert "D=1" in out


def test_error_exit_codes(tmp_path, ghz3):
    assert run("mpe", "--state", ghz3, "--chi", 0)[0] == EXIT_INVALID_CONFIG
    assert run("mpe", "--state", tmp_path / "missing.json", "--chi", 1)[0] == EXIT_IO_FAILURE
    assert run("table", "--max-depth", 1)[0] == EXIT_INVALID_CONFIG
