# circuits/equivalence.py
"""
鍵維度 2 的 MPS 與單層階梯線路之間的精確互轉

線路 → MPS：格點張量直接讀取閘的 (a, 0) 輸入行
MPS → 線路：規範固定後，閘的 (a, 1) 輸入行由 M 矩陣的零空間補齊
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from core.constants import CORRUPTED_ISOMETRY_TOL, KERNEL_EIG_TOL, PHYSICAL_DIM
from core.exceptions import InvalidConfigError, NumericalError
from core.linalg import eigh
from mps.state import (
    CanonicalForm,
    MatrixProductState,
    canonicalize_right,
    is_right_canonical,
    norm,
    right_isometry_residual,
)
from .staircase import GATE_DIM, StaircaseCircuit

logger = logging.getLogger(__name__)

BOND_DIM = 2


@dataclass(frozen=True)
class KernelCompletion:
    """
    單一格點的零空間補全

    m_matrix[i, j] = Σ_a conj(v_a[i]) v_a[j]，v_a 為閘在輸入 (a, 0) 的行；
    kernel_vectors 為 M 的兩個零特徵向量，取共軛後即為輸入 (a, 1) 的行
    """
    m_matrix: np.ndarray
    eigenvalues: np.ndarray
    kernel_vectors: np.ndarray

    @property
    def kernel_dim(self) -> int:
        return int(np.count_nonzero(self.eigenvalues < KERNEL_EIG_TOL))

    def completion_columns(self) -> np.ndarray:
        """(4, 2) 與指定行正交的補全行"""
        return self.kernel_vectors.conj().T


def circuit_to_mps(c: StaircaseCircuit) -> MatrixProductState:
    """
    單層線路的鍵維度 2 MPS

    A[p][s, a, b] = G_p[(s, b), (a, 0)]，最後一個格點為單位矩陣
    """
    if c.depth != 1:
        raise InvalidConfigError(f"circuit_to_mps 只接受單層線路，得到 D={c.depth}")
    n = c.n_qubits
    sites = []
    for p in range(n - 1):
        block = c.gates[0, p].reshape(PHYSICAL_DIM, BOND_DIM, BOND_DIM, PHYSICAL_DIM)
        # block[s, b, a, t]：輸出 (s, b)，輸入 (a, t)，只取 t = 0
        site = block[:, :, :, 0].transpose(0, 2, 1)
        if p == 0:
            site = site[:, :1, :]
        sites.append(site)
    sites.append(np.eye(PHYSICAL_DIM, dtype=np.complex128).reshape(PHYSICAL_DIM, BOND_DIM, 1))
    return MatrixProductState(tuple(sites), CanonicalForm.RIGHT, center=0)


def _check_bonds(phi: MatrixProductState):
    if phi.n < 2:
        raise InvalidConfigError("至少需要 2 個位元")
    if phi.max_bond > BOND_DIM:
        raise InvalidConfigError(f"鍵維度 {phi.max_bond} 超過 2，無法以單層線路精確準備")


def _is_gauge_fixed(phi: MatrixProductState) -> bool:
    last = phi.sites[-1][:, :, 0]
    return (
        phi.bond_dims == [BOND_DIM] * (phi.n - 1)
        and last.shape == (PHYSICAL_DIM, BOND_DIM)
        and np.allclose(last, np.eye(PHYSICAL_DIM), atol=1e-12, rtol=0)
        and is_right_canonical(phi)
        and abs(norm(phi) - 1.0) <= 1e-12
    )


def gauge_fix_last_tensor(phi: MatrixProductState) -> MatrixProductState:
    """
    右正則化並使最後一個格點恰為 2×2 單位矩陣

    鍵維度不足 2 者先以零填充；最後格點的么正 B 吸收到前一格點的右指標
    """
    _check_bonds(phi)
    if _is_gauge_fixed(phi):
        return phi
    n = phi.n
    dims = [1] + [BOND_DIM] * (n - 1) + [1]
    padded = []
    for k, a in enumerate(phi.sites):
        site = np.zeros((PHYSICAL_DIM, dims[k], dims[k + 1]), dtype=np.complex128)
        site[:, :a.shape[1], :a.shape[2]] = a
        padded.append(site)
    sites = list(canonicalize_right(MatrixProductState(tuple(padded))).sites)

    b = sites[-1][:, :, 0]
    sites[-2] = np.einsum('sxl,ml->sxm', sites[-2], b)
    sites[-1] = np.eye(PHYSICAL_DIM, dtype=np.complex128).reshape(PHYSICAL_DIM, BOND_DIM, 1)
    return MatrixProductState(tuple(sites), CanonicalForm.RIGHT, center=0)


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    pivot = vec[int(np.argmax(np.abs(vec)))]
    return vec * (abs(pivot) / pivot)


def kernel_completion(specified: np.ndarray) -> KernelCompletion:
    """
    給定 (2, 4) 的指定行 v_a，回傳 M 與其兩個零特徵向量

    特徵向量依特徵值遞增排列，最大分量取為正實數，再做 Gram–Schmidt
    """
    specified = np.asarray(specified, dtype=np.complex128)
    if specified.shape != (BOND_DIM, GATE_DIM):
        raise InvalidConfigError(f"指定行必須為 (2, 4)，得到 {specified.shape}")
    m = np.einsum('ai,aj->ij', specified.conj(), specified)
    values, vectors = eigh(m)
    w0 = _phase_fixed(vectors[:, 0])
    w0 = w0 / np.linalg.norm(w0)
    w1 = _phase_fixed(vectors[:, 1])
    w1 = w1 - np.vdot(w0, w1) * w0
    w1 = w1 / np.linalg.norm(w1)
    completion = KernelCompletion(m_matrix=m, eigenvalues=values, kernel_vectors=np.array([w0, w1]))
    if completion.kernel_dim != 2:
        logger.debug(f"M 的零特徵值個數為 {completion.kernel_dim}，特徵值 {values}")
    return completion


def _first_site_rows(site: np.ndarray) -> np.ndarray:
    """第一個格點只指定 a = 0；以與其正交的單位向量補齊第二列"""
    v0 = site[:, 0, :].reshape(-1)
    m = np.outer(v0.conj(), v0)
    _, vectors = eigh(m)
    v1 = _phase_fixed(vectors[:, 0]).conj()
    return np.array([v0, v1 / np.linalg.norm(v1)])


def _site_rows(fixed: MatrixProductState, k: int) -> np.ndarray:
    site = fixed.sites[k]
    if k == 0:
        return _first_site_rows(site)
    return site.transpose(1, 0, 2).reshape(BOND_DIM, GATE_DIM)


def site_completions(phi: MatrixProductState) -> List[KernelCompletion]:
    """規範固定後每個格點 0…N−2 的零空間補全"""
    fixed = gauge_fix_last_tensor(phi)
    return [kernel_completion(_site_rows(fixed, k)) for k in range(fixed.n - 1)]


def mps_to_circuit(phi: MatrixProductState) -> StaircaseCircuit:
    """
    由鍵維度 ≤ 2 的 MPS 合成單層階梯線路

    閘的 (a, 0) 輸入行取自規範固定後的格點張量，(a, 1) 輸入行為零空間補全
    """
    _check_bonds(phi)
    if abs(norm(phi) - 1.0) > 1e-8:
        raise InvalidConfigError(f"MPS 未歸一化（‖φ‖={norm(phi):.12f}）")
    fixed = gauge_fix_last_tensor(phi)
    residual = right_isometry_residual(fixed)
    if residual > CORRUPTED_ISOMETRY_TOL:
        raise NumericalError(f"規範固定後的等距殘差 {residual:.3e} 過大，輸入可能已損壞")

    n = fixed.n
    gates = np.zeros((1, n - 1, GATE_DIM, GATE_DIM), dtype=np.complex128)
    for k in range(n - 1):
        rows = _site_rows(fixed, k)
        completion = kernel_completion(rows)
        extra = completion.completion_columns()
        for a in range(BOND_DIM):
            gates[0, k, :, 2 * a] = rows[a]
            gates[0, k, :, 2 * a + 1] = extra[:, a]
    logger.debug(f"已合成 N={n} 的單層線路")
    return StaircaseCircuit(n, 1, gates)
