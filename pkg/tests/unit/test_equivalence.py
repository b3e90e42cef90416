# test_equivalence.py
import numpy as np
import pytest

from circuits.equivalence import (
    circuit_to_mps,
    gauge_fix_last_tensor,
    kernel_completion,
    mps_to_circuit,
    site_completions,
)
from circuits.staircase import StaircaseCircuit, apply_circuit, identity_circuit, random_circuit
from core.config import MpeOptions
from core.exceptions import InvalidConfigError
from core.linalg import unitarity_residual
from measures.entanglement import chi_mpe
from mps.state import (
    MatrixProductState,
    from_dense,
    is_right_canonical,
    overlap,
    product_mps,
    random_mps,
    right_isometry_residual,
    to_dense,
)
from states.reference import basis_state, ghz_state

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def _fidelity_with(phi: MatrixProductState, circuit) -> float:
    return abs(np.vdot(to_dense(phi).amplitudes, apply_circuit(circuit).amplitudes)) ** 2


# --- 線路 → MPS ---
def test_identity_circuit_gives_zero_state():
    phi = circuit_to_mps(identity_circuit(5, 1))
    assert abs(to_dense(phi).inner(basis_state("00000"))) == pytest.approx(1.0, abs=1e-12)


def test_bell_gate_gives_bell_product():
    gates = np.array([CNOT @ np.kron(H, np.eye(2)), np.eye(4), np.eye(4)]).reshape(1, 3, 4, 4)
    c = StaircaseCircuit(4, 1, gates)
    phi = circuit_to_mps(c)
    assert phi.max_bond == 2
    assert _fidelity_with(phi, c) == pytest.approx(1.0, abs=1e-12)


def test_circuit_to_mps_random_instances():
    for seed in range(100):
        c = random_circuit(8, 1, seed)
        phi = circuit_to_mps(c)
        assert phi.max_bond <= 2
        assert right_isometry_residual(phi) <= 1e-10
        assert _fidelity_with(phi, c) >= 1 - 1e-10


def test_circuit_to_mps_requires_single_layer():
    with pytest.raises(InvalidConfigError):
        circuit_to_mps(random_circuit(4, 2, 0))


# --- 規範固定 ---
def test_gauge_fix_keeps_target_gauge():
    phi = circuit_to_mps(random_circuit(5, 1, 3))
    fixed = gauge_fix_last_tensor(phi)
    for a, b in zip(phi.sites, fixed.sites):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_gauge_fix_random_mps():
    phi = random_mps(6, 2, seed=5)
    fixed = gauge_fix_last_tensor(phi)
    assert abs(overlap(phi, fixed)) == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(fixed.sites[-1][:, :, 0], np.eye(2), atol=1e-12)
    assert is_right_canonical(fixed)


def test_gauge_fix_pads_product_state():
    phi = product_mps([[1, 0], [0, 1], [1, 1j]])
    phi = MatrixProductState(tuple(a / np.linalg.norm(a) for a in phi.sites))
    fixed = gauge_fix_last_tensor(phi)
    assert fixed.bond_dims == [2, 2]
    assert abs(overlap(phi, fixed)) == pytest.approx(1.0, abs=1e-10)


def test_gauge_fix_rejects_wide_bonds():
    with pytest.raises(InvalidConfigError):
        gauge_fix_last_tensor(random_mps(6, 3, seed=0))


# --- 零空間補全 ---
def test_kernel_completion_rank_two():
    phi = random_mps(6, 2, seed=9)
    for completion in site_completions(phi):
        assert completion.kernel_dim == 2
        assert np.allclose(completion.m_matrix, completion.m_matrix.conj().T, atol=1e-12)
        w = completion.kernel_vectors
        np.testing.assert_allclose(w @ w.conj().T, np.eye(2), atol=1e-10)
        np.testing.assert_allclose(completion.m_matrix @ w.T, 0, atol=1e-10)


def test_kernel_completion_is_deterministic():
    rows = np.eye(4)[:2]
    a = kernel_completion(rows)
    b = kernel_completion(rows.copy())
    np.testing.assert_array_equal(a.kernel_vectors, b.kernel_vectors)
    with pytest.raises(InvalidConfigError):
        kernel_completion(np.eye(4))


# --- MPS → 線路 ---
def test_zero_state_synthesis():
    circuit = mps_to_circuit(from_dense(basis_state("0000")))
    assert abs(apply_circuit(circuit).inner(basis_state("0000"))) == pytest.approx(1.0, abs=1e-12)


def test_ghz_synthesis():
    for n in (2, 4, 7):
        circuit = mps_to_circuit(from_dense(ghz_state(n)))
        assert abs(apply_circuit(circuit).inner(ghz_state(n))) ** 2 >= 1 - 1e-8


def test_random_mps_synthesis():
    for seed in range(100):
        phi = random_mps(8, 2, seed=seed)
        circuit = mps_to_circuit(phi)
        assert circuit.depth == 1
        for p in range(7):
            assert unitarity_residual(circuit.gate(0, p)) <= 1e-10
        assert all(c.kernel_dim == 2 for c in site_completions(phi))
        assert _fidelity_with(phi, circuit) >= 1 - 1e-8


def test_round_trip_through_mps():
    for seed in range(100):
        c = random_circuit(8, 1, seed)
        rebuilt = mps_to_circuit(circuit_to_mps(c))
        assert abs(apply_circuit(rebuilt).inner(apply_circuit(c))) ** 2 >= 1 - 1e-8


@pytest.mark.parametrize("n", [4, 6, 8])
def test_bidirectional_closure(n):
    phi = random_mps(n, 2, seed=n)
    assert _fidelity_with(phi, mps_to_circuit(phi)) >= 1 - 1e-8
    c = random_circuit(n, 1, seed=n)
    assert _fidelity_with(circuit_to_mps(c), c) >= 1 - 1e-8


def test_single_layer_has_zero_chi_two_mpe():
    psi = apply_circuit(random_circuit(6, 1, 21))
    assert chi_mpe(psi, 2, MpeOptions(restarts=2)).value_bits <= 1e-6


def test_synthesis_rejects_bad_input():
    with pytest.raises(InvalidConfigError):
        mps_to_circuit(random_mps(5, 4, seed=0))
    with pytest.raises(InvalidConfigError):
        mps_to_circuit(product_mps([[2, 0], [1, 0]]))
