# test_scan_pipeline.py
"""
小規模端到端標度掃描：N=4、兩個深度、三個 χ
"""

from collections import defaultdict

import pytest

from circuits.staircase import fit_circuit
from core.config import FitOptions, MpeOptions, ScanConfig
from experiment.results_logger import emit_results
from experiment.scaling_engine import fit_records, load_records, scan_scaling
from measures.entanglement import chi_mpe
from states.rps import RpsSpec, generalized_rps

MPE = MpeOptions(restarts=2, seed=0, max_sweeps=100, tol=1e-10)
FIT = FitOptions(restarts=2, seed=0, max_sweeps=100, tol=1e-10)


@pytest.fixture(scope="module")
def config():
    return ScanConfig(n=4, depths=[1, 2], chis=[1, 2, 3], sigma_grid=[0.0, 1.0, 4.0],
                      seeds=2, mu=5.0, mpe=MPE, fit=FIT)


@pytest.fixture(scope="module")
def records(config):
    return scan_scaling(config)


def test_record_count_and_order(config, records):
    assert len(records) == 2 * 3 * 3 * 2
    keys = [r.key for r in records]
    assert keys == sorted(keys)
    assert all(r.mu == 5.0 for r in records)


def test_mpe_is_monotone_in_chi(records):
    by_target = defaultdict(dict)
    for r in records:
        by_target[(r.depth, r.sigma, r.seed)][r.chi] = r.E_bits
    for values in by_target.values():
        assert values[1] >= values[2] - 1e-9
        assert values[2] >= values[3] - 1e-9


def test_fit_is_monotone_in_depth(records):
    f = {(r.depth, r.sigma, r.seed): r.F_bits for r in records}
    for (depth, sigma, seed), value in f.items():
        if depth == 1:
            assert f[(2, sigma, seed)] <= value + 1e-9


def test_uniform_amplitudes_are_product(records):
    # σ=0 時所有振幅相同，即 |+⟩^N
    flat = [r for r in records if r.sigma == 0.0]
    assert flat
    for r in flat:
        assert r.F_bits == pytest.approx(0.0, abs=1e-6)
        assert r.E_bits == pytest.approx(0.0, abs=1e-8)


def test_record_matches_direct_computation(config, records):
    record = next(r for r in records if r.depth == 1 and r.chi == 1 and r.sigma == 1.0)
    psi = generalized_rps(RpsSpec.build(n_qubits=4, mu=record.mu, sigma=record.sigma, seed=record.seed))
    assert record.E_bits == pytest.approx(chi_mpe(psi, 1, MPE).value_bits, abs=1e-12)
    assert record.F_bits == pytest.approx(fit_circuit(psi, 1, FIT).f_bits, abs=1e-12)


def test_parallel_scan_is_identical(config, records):
    parallel = scan_scaling(config.model_copy(update={"workers": 3}))
    assert parallel == records


def test_csv_refit_matches_report(tmp_path, records):
    reports = fit_records(records)
    emit_results(records, reports, tmp_path / "scan.csv", tmp_path / "report.json")
    refit = fit_records(load_records(tmp_path / "scan.csv"))
    assert [(r.depth, r.chi) for r in refit] == [(r.depth, r.chi) for r in reports]
    for a, b in zip(refit, reports):
        assert a.r_squared == pytest.approx(b.r_squared, abs=1e-12)
        assert a.slope == pytest.approx(b.slope, abs=1e-12)
