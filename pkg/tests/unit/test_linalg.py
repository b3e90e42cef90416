# test_linalg.py
import numpy as np
import pytest

from core.exceptions import DimensionMismatchError, InvalidConfigError, NumericalError
from core.linalg import (
    as_tensor,
    contract,
    eigh,
    polar_factor,
    random_unitary,
    singular_values,
    svd_split,
    unitarity_residual,
)


# --- 張量建構 ---
def test_as_tensor_reshape_and_dtype():
    t = as_tensor(range(8), (2, 2, 2))
    assert t.shape == (2, 2, 2)
    assert t.dtype == np.complex128
    assert t[1, 0, 1] == 5


def test_as_tensor_rejects_non_finite():
    with pytest.raises(NumericalError):
        as_tensor([1.0, np.nan])


def test_as_tensor_rejects_bad_shape():
    with pytest.raises(DimensionMismatchError):
        as_tensor(range(6), (2, 2))
    with pytest.raises(InvalidConfigError):
        as_tensor([], (0,))


# --- 縮並 ---
def test_contract_matches_einsum(rng):
    a = rng.normal(size=(2, 3, 4)) + 1j * rng.normal(size=(2, 3, 4))
    b = rng.normal(size=(4, 3, 5))
    out = contract(a, b, [(1, 1), (2, 0)])
    np.testing.assert_allclose(out, np.einsum('ijk,kjl->il', a, b), atol=1e-12)


def test_contract_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        contract(np.ones((2, 3)), np.ones((2, 3)), [(1, 0)])


# --- 分解 ---
def test_svd_split_reconstructs(rng):
    m = rng.normal(size=(6, 4)) + 1j * rng.normal(size=(6, 4))
    u, s, vh = svd_split(m)
    np.testing.assert_allclose(u @ np.diag(s) @ vh, m, atol=1e-12)
    assert np.all(np.diff(s) <= 0)
    np.testing.assert_allclose(singular_values(m), s, atol=1e-12)


def test_svd_split_requires_matrix():
    with pytest.raises(InvalidConfigError):
        svd_split(np.ones((2, 2, 2)))


def test_eigh_ascending_and_hermitian_check(rng):
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = z + z.conj().T
    values, vectors = eigh(h)
    assert np.all(np.diff(values) >= 0)
    np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.conj().T, h, atol=1e-10)
    with pytest.raises(NumericalError):
        eigh(z)


# --- 極分解 ---
def test_polar_factor_maximizes_trace(rng):
    e = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    g = polar_factor(e)
    assert unitarity_residual(g) < 1e-12
    best = abs(np.trace(g @ e))
    assert best == pytest.approx(np.sum(singular_values(e)), abs=1e-10)
    for _ in range(20):
        w = random_unitary(4, rng)
        assert abs(np.trace(w @ e)) <= best + 1e-10


def test_polar_factor_of_zero_is_identity():
    np.testing.assert_array_equal(polar_factor(np.zeros((4, 4))), np.eye(4))


def test_random_unitary_is_unitary(rng):
    for dim in (2, 4, 8):
        assert unitarity_residual(random_unitary(dim, rng)) < 1e-12
