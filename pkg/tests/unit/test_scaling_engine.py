# test_scaling_engine.py
import math

import numpy as np
import pytest

from core.constants import OUTCOME_ORTHOGONAL, SCALING_CSV_HEADER, SCALING_LINEAR, SCALING_SUB_LINEAR, SCALING_SUPER_LINEAR
from core.events import ScalingRecord
from core.exceptions import DegenerateFitError, InvalidConfigError, ResultIOError
from experiment.results_logger import build_report, emit_results, write_records_csv
from experiment.scaling_engine import fit_records, linear_fit_r2, load_records


def _record(**overrides) -> ScalingRecord:
    values = dict(depth=1, chi=2, sigma=0.5, mu=5.0, seed=0, F_bits=0.1, E_bits=0.1)
    values.update(overrides)
    return ScalingRecord(**values)


# --- 線性擬合 ---
def test_exact_line():
    report = linear_fit_r2([(f, 2 * f) for f in np.linspace(0, 3, 7)])
    assert report.slope == pytest.approx(2.0)
    assert report.intercept == pytest.approx(0.0, abs=1e-12)
    assert report.r_squared == pytest.approx(1.0)
    assert report.slope_through_origin == pytest.approx(2.0)
    assert report.classification == SCALING_LINEAR


def test_convex_is_super_linear():
    report = linear_fit_r2([(f, f ** 2) for f in np.linspace(0, 4, 13)])
    assert report.r_squared < 0.999
    assert report.classification == SCALING_SUPER_LINEAR
    assert report.upper_tercile_positive > report.upper_tercile_negative


def test_concave_is_sub_linear():
    report = linear_fit_r2([(f, math.sqrt(f)) for f in np.linspace(0.05, 4, 13)])
    assert report.classification == SCALING_SUB_LINEAR


def test_matches_normal_equations():
    points = [(0.1, 0.3), (0.7, 0.6), (1.2, 1.5), (2.0, 1.9), (2.9, 3.2)]
    f = np.array([p[0] for p in points])
    e = np.array([p[1] for p in points])
    design = np.column_stack([np.ones_like(f), f])
    intercept, slope = np.linalg.solve(design.T @ design, design.T @ e)
    residuals = e - design @ np.array([intercept, slope])
    r2 = 1 - residuals @ residuals / np.sum((e - e.mean()) ** 2)

    report = linear_fit_r2(points, chi=3, depth=2)
    assert report.slope == pytest.approx(slope, abs=1e-12)
    assert report.intercept == pytest.approx(intercept, abs=1e-12)
    assert report.r_squared == pytest.approx(r2, abs=1e-12)
    assert report.slope_through_origin == pytest.approx(f @ e / (f @ f), abs=1e-12)
    assert (report.chi, report.depth, report.n_points) == (3, 2, 5)


def test_point_on_fitted_line_never_lowers_r2():
    points = [(0.1, 0.3), (0.7, 0.6), (1.2, 1.5), (2.0, 1.9), (2.9, 3.2)]
    report = linear_fit_r2(points)
    extra = (1.5, report.intercept + report.slope * 1.5)
    assert linear_fit_r2(points + [extra]).r_squared >= report.r_squared - 1e-12


def test_fit_errors():
    with pytest.raises(InvalidConfigError):
        linear_fit_r2([(0.0, 0.0), (1.0, 1.0)])
    with pytest.raises(DegenerateFitError):
        linear_fit_r2([(1.0, 0.0), (1.0, 1.0), (1.0, 2.0)])


def test_fit_records_groups_and_skips_flagged():
    records = [_record(seed=i, F_bits=0.1 * (i + 1), E_bits=0.2 * (i + 1)) for i in range(4)]
    records.append(_record(seed=9, F_bits=math.inf, E_bits=math.inf, outcome=OUTCOME_ORTHOGONAL))
    records += [_record(chi=3, seed=i, F_bits=0.1 * (i + 1), E_bits=0.05) for i in range(4)]
    reports = fit_records(records)
    assert [(r.depth, r.chi) for r in reports] == [(1, 2), (1, 3)]
    assert reports[0].n_points == 4
    assert reports[0].slope == pytest.approx(2.0)


# --- 記錄模型 ---
def test_record_validation():
    with pytest.raises(ValueError):
        _record(F_bits=-0.1)
    with pytest.raises(ValueError):
        _record(outcome="lost")


# --- 輸出 ---
def test_empty_csv_has_header_only(tmp_path):
    path = tmp_path / "scan.csv"
    write_records_csv([], path)
    assert path.read_text(encoding="utf-8") == ",".join(SCALING_CSV_HEADER) + "\n"
    assert load_records(path) == []


def test_single_record_round_trip(tmp_path):
    path = tmp_path / "scan.csv"
    record = _record(sigma=0.3535533905932738, F_bits=0.123456789012345, E_bits=0.1134, e_converged=False)
    write_records_csv([record], path)
    [loaded] = load_records(path)
    assert loaded == record


def test_flagged_record_round_trip(tmp_path):
    path = tmp_path / "scan.csv"
    write_records_csv([_record(F_bits=math.inf, E_bits=math.inf, outcome=OUTCOME_ORTHOGONAL)], path)
    [loaded] = load_records(path)
    assert loaded.outcome == OUTCOME_ORTHOGONAL
    assert not loaded.is_finite


def test_csv_is_deterministic(tmp_path):
    records = [_record(seed=i, F_bits=0.1 * i, E_bits=0.3 * i) for i in range(5)]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_records_csv(records, a)
    write_records_csv(records, b)
    assert a.read_bytes() == b.read_bytes()


def test_emit_results_report(tmp_path):
    records = [_record(seed=i, F_bits=0.1 * (i + 1), E_bits=0.2 * (i + 1)) for i in range(4)]
    reports = fit_records(records)
    emit_results(records, reports, tmp_path / "out" / "scan.csv", tmp_path / "out" / "report.json",
                 config={"n": 4})
    import json
    report = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert report["metadata"]["log_base"] == 2
    assert report["metadata"]["layer_layout"]
    assert report["metadata"]["rps_convention"]
    assert report["config"] == {"n": 4}
    assert report["fits"][0]["r_squared"] == pytest.approx(1.0)
    assert "version" in report and "generated_at" in report


def test_build_report_without_table():
    assert "table" not in build_report([])


def test_load_records_errors(tmp_path):
    with pytest.raises(ResultIOError):
        load_records(tmp_path / "missing.csv")
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_records(bad)


# --- 深度 → χ 表格 ---
def test_depth_chi_table_from_records(caplog):
    from core.config import TableConfig
    from experiment.scaling_engine import depth_chi_table

    records = []
    for seed in range(5):
        f = 0.1 * (seed + 1)
        records.append(_record(depth=1, chi=1, seed=seed, F_bits=f, E_bits=f ** 2))
        records.append(_record(depth=1, chi=2, seed=seed, F_bits=f, E_bits=f))
        records.append(_record(depth=2, chi=2, seed=seed, F_bits=f, E_bits=f))
    table = depth_chi_table(TableConfig(), records)

    row1, row2 = table.rows
    assert row1.depth == 1
    assert row1.linear_chis == [2]
    assert row1.argmax_chi == 2
    assert row1.r_squared[1] < 0.999
    assert row1.within_reference is True
    # D=2 的參考 χ 為 3
    assert row2.argmax_chi == 2
    assert row2.within_reference is False
    assert any("D=2" in message for message in caplog.messages)
    assert len(table.reports) == 3
