# test_random_states.py
import math

import numpy as np
import pytest

from core.exceptions import InvalidConfigError
from mps.state import half_chain_entropy
from states.reference import basis_state, bell_state, ghz_state, product_state, w_state
from states.rps import RpsSpec, generalized_rps, mean_half_chain_entropy, page_entropy_reference


# --- 廣義隨機純態 ---
def test_zero_sigma_gives_uniform_product():
    psi = generalized_rps(RpsSpec.build(n_qubits=5, mu=5.0, sigma=0.0, seed=3))
    np.testing.assert_allclose(np.abs(psi.amplitudes), np.full(32, 1 / np.sqrt(32)), atol=1e-14)
    assert half_chain_entropy(psi) == pytest.approx(0.0, abs=1e-10)


def test_rps_deterministic_and_normalized():
    spec = RpsSpec.build(n_qubits=6, mu=5.0, sigma=2.0, seed=11)
    a, b = generalized_rps(spec), generalized_rps(spec)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    assert a.norm == pytest.approx(1.0, abs=1e-12)
    other = generalized_rps(RpsSpec.build(n_qubits=6, mu=5.0, sigma=2.0, seed=12))
    assert not np.allclose(a.amplitudes, other.amplitudes)


def test_rps_has_complex_amplitudes():
    psi = generalized_rps(RpsSpec.build(n_qubits=4, mu=0.0, sigma=1.0, seed=0))
    assert np.any(np.abs(psi.amplitudes.imag) > 0)


def test_rps_spec_validation():
    with pytest.raises(InvalidConfigError):
        RpsSpec.build(n_qubits=4, mu=0.0, sigma=0.0)
    with pytest.raises(InvalidConfigError):
        RpsSpec.build(n_qubits=4, mu=5.0, sigma=-1.0)
    with pytest.raises(InvalidConfigError):
        RpsSpec.build(n_qubits=0, sigma=1.0)


def test_entropy_decreases_with_mean_over_sigma():
    low = mean_half_chain_entropy(12, 20, mu=5.0, sigma=0.5, seed=0)
    high = mean_half_chain_entropy(12, 20, mu=5.0, sigma=16.0, seed=0)
    assert low < high


# --- Page 參考值 ---
def test_page_reference_values():
    assert page_entropy_reference(12) == pytest.approx(5.27865, abs=1e-5)
    assert page_entropy_reference(2) == pytest.approx(0.27865, abs=1e-5)
    assert page_entropy_reference(4) == pytest.approx(2 - 1 / (2 * math.log(2)), abs=1e-12)
    with pytest.raises(InvalidConfigError):
        page_entropy_reference(5)


def test_standard_rps_obeys_volume_law():
    mean = mean_half_chain_entropy(12, 100, mu=0.0, sigma=1.0, seed=0)
    assert abs(mean - page_entropy_reference(12)) / page_entropy_reference(12) < 0.02


def test_mean_entropy_needs_samples():
    with pytest.raises(InvalidConfigError):
        mean_half_chain_entropy(4, 0)


# --- 參考態 ---
def test_reference_states():
    assert ghz_state(3).amplitudes[0] == pytest.approx(1 / np.sqrt(2))
    assert np.count_nonzero(w_state(4).amplitudes) == 4
    assert abs(bell_state().inner(ghz_state(2))) == pytest.approx(1.0)
    assert basis_state("10").amplitudes[2] == 1.0
    plus = product_state([math.pi / 2, math.pi / 2])
    np.testing.assert_allclose(plus.amplitudes, np.full(4, 0.5), atol=1e-12)


def test_reference_state_validation():
    with pytest.raises(InvalidConfigError):
        basis_state("012")
    with pytest.raises(InvalidConfigError):
        ghz_state(1)
    with pytest.raises(InvalidConfigError):
        product_state([0.1], [0.1, 0.2])
