# core/linalg.py
"""
稠密複數張量代數
縮並、重排以及其餘模組共用的矩陣分解
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh as _scipy_eigh, svd as _scipy_svd

from .constants import HERMITIAN_TOL
from .exceptions import DimensionMismatchError, InvalidConfigError, NumericalError

logger = logging.getLogger(__name__)

# 張量一律為 complex128 的 numpy 陣列，列優先（最左指標變化最慢）
ComplexTensor = np.ndarray


def as_tensor(data, shape: Sequence[int] = None) -> ComplexTensor:
    """轉為 complex128 張量並檢查有限性"""
    arr = np.asarray(data, dtype=np.complex128)
    if shape is not None:
        shape = tuple(int(d) for d in shape)
        if any(d < 1 for d in shape):
            raise InvalidConfigError(f"張量維度必須為正整數: {shape}")
        if int(np.prod(shape)) != arr.size:
            raise DimensionMismatchError(f"維度 {shape} 與振幅數 {arr.size} 不符")
        arr = arr.reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise NumericalError("張量含有 NaN 或 Inf")
    return arr


def contract(a: ComplexTensor, b: ComplexTensor,
             axes: Sequence[Tuple[int, int]]) -> ComplexTensor:
    """
    沿成對指標縮並兩個張量

    Args:
        a, b: 輸入張量
        axes: (a 的指標, b 的指標) 配對列表

    Returns:
        a 的未縮並指標接上 b 的未縮並指標
    """
    a = np.asarray(a)
    b = np.asarray(b)
    axes_a = [int(p[0]) for p in axes]
    axes_b = [int(p[1]) for p in axes]
    for ia, ib in zip(axes_a, axes_b):
        if not (-a.ndim <= ia < a.ndim and -b.ndim <= ib < b.ndim):
            raise DimensionMismatchError(f"指標超出範圍: ({ia}, {ib})")
        if a.shape[ia] != b.shape[ib]:
            raise DimensionMismatchError(
                f"縮並維度不符: a[{ia}]={a.shape[ia]} 與 b[{ib}]={b.shape[ib]}")
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def svd_split(m: ComplexTensor) -> Tuple[ComplexTensor, np.ndarray, ComplexTensor]:
    """
    精簡奇異值分解 m = U·diag(S)·Vh

    gesdd 失敗時改用 gesvd
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise InvalidConfigError(f"svd_split 需要矩陣，得到 rank {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("SVD 輸入含有 NaN 或 Inf")
    try:
        u, s, vh = _scipy_svd(m, full_matrices=False, lapack_driver='gesdd')
    except LinAlgError:
        logger.debug("gesdd 未收斂，改用 gesvd")
        try:
            u, s, vh = _scipy_svd(m, full_matrices=False, lapack_driver='gesvd')
        except LinAlgError as e:
            raise NumericalError(f"SVD 失敗: {e}") from e
    return u, s, vh


def singular_values(m: ComplexTensor) -> np.ndarray:
    """只計算奇異值（遞減）"""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise NumericalError("SVD 輸入含有 NaN 或 Inf")
    try:
        return _scipy_svd(m, compute_uv=False, lapack_driver='gesdd')
    except LinAlgError:
        return _scipy_svd(m, compute_uv=False, lapack_driver='gesvd')


def eigh(m: ComplexTensor, tol: float = HERMITIAN_TOL) -> Tuple[np.ndarray, ComplexTensor]:
    """厄米矩陣的特徵分解，特徵值遞增"""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidConfigError(f"eigh 需要方陣，得到 {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("eigh 輸入含有 NaN 或 Inf")
    deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if deviation > tol:
        raise NumericalError(f"矩陣非厄米，偏差 {deviation:.3e}")
    try:
        values, vectors = _scipy_eigh(0.5 * (m + m.conj().T))
    except LinAlgError as e:
        raise NumericalError(f"特徵分解失敗: {e}") from e
    return values, vectors


def polar_factor(e: ComplexTensor) -> ComplexTensor:
    """
    極分解的么正部分 V·U†（e = U·diag(S)·Vh）

    在所有么正矩陣 G 中最大化 |tr(G·e)|；零矩陣回傳單位矩陣
    """
    e = np.asarray(e, dtype=np.complex128)
    if e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise InvalidConfigError(f"polar_factor 需要方陣，得到 {e.shape}")
    if not np.any(e):
        return np.eye(e.shape[0], dtype=np.complex128)
    u, _, vh = svd_split(e)
    return vh.conj().T @ u.conj().T


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexTensor:
    """隨機複數矩陣經 QR 正交化（對角相位固定）"""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def unitarity_residual(g: ComplexTensor) -> float:
    """‖G†G − I‖ 的最大元素"""
    g = np.asarray(g)
    return float(np.max(np.abs(g.conj().T @ g - np.eye(g.shape[1]))))
