# mps/state.py
"""
開放邊界矩陣乘積態
由稠密態建構、正則形式、截斷、重疊與雙分糾纏熵
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config_manager import config_manager
from core.constants import ISOMETRY_TOL, NORM_TOL, PHYSICAL_DIM
from core.exceptions import DimensionMismatchError, InvalidConfigError, NumericalError
from core.linalg import as_tensor, singular_values, svd_split

logger = logging.getLogger(__name__)

# 相對於最大奇異值，低於此比例視為數值零
SVD_CUTOFF = 1e-14


class CanonicalForm(str, Enum):
    """規範形式"""
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"
    MIXED = "mixed"


@dataclass(frozen=True, eq=False)
class DenseState:
    """2^N 振幅的稠密態，基底 |s1 s2 … sN⟩，s1 變化最慢"""
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidConfigError(f"量子位元數必須為正: {self.n_qubits}")
        amps = np.array(as_tensor(self.amplitudes)).reshape(-1)
        if amps.size != 2 ** self.n_qubits:
            raise DimensionMismatchError(
                f"振幅數 {amps.size} 不等於 2^{self.n_qubits}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vector, normalize: bool = True) -> "DenseState":
        """由任意向量建立態，預設歸一化"""
        vec = as_tensor(vector).reshape(-1)
        n = int(round(np.log2(vec.size))) if vec.size else 0
        if vec.size == 0 or 2 ** n != vec.size:
            raise DimensionMismatchError(f"向量長度 {vec.size} 不是 2 的次方")
        if normalize:
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                raise InvalidConfigError("零向量無法歸一化")
            vec = vec / nrm
        return cls(n, vec)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def require_normalized(self, tol: float = 1e-10):
        if not self.is_normalized(tol):
            raise InvalidConfigError(f"態未歸一化（‖ψ‖={self.norm:.12f}）")

    def tensor(self) -> np.ndarray:
        """重排為 (2,)*N 張量"""
        return self.amplitudes.reshape((PHYSICAL_DIM,) * self.n_qubits)

    def inner(self, other: "DenseState") -> complex:
        """⟨self|other⟩"""
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError(
                f"位元數不符: {self.n_qubits} 與 {other.n_qubits}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def with_phase(self, theta: float) -> "DenseState":
        return DenseState(self.n_qubits, np.exp(1j * theta) * self.amplitudes)


@dataclass(frozen=True, eq=False)
class MatrixProductState:
    """
    開放邊界 MPS

    每個格點張量的指標順序為 (物理 s, 左虛擬 a_{n-1}, 右虛擬 a_n)，
    邊界虛擬維度固定為 1
    """
    sites: Tuple[np.ndarray, ...]
    canonical_form: CanonicalForm = CanonicalForm.NONE
    center: Optional[int] = None

    def __post_init__(self):
        sites = tuple(np.array(as_tensor(a)) for a in self.sites)
        if not sites:
            raise InvalidConfigError("MPS 至少需要一個格點")
        for k, a in enumerate(sites):
            if a.ndim != 3:
                raise InvalidConfigError(f"格點 {k} 必須是 rank-3，得到 {a.shape}")
            if a.shape[0] != PHYSICAL_DIM:
                raise InvalidConfigError(f"格點 {k} 物理維度必須為 2，得到 {a.shape[0]}")
        if sites[0].shape[1] != 1 or sites[-1].shape[2] != 1:
            raise InvalidConfigError("邊界虛擬維度必須為 1")
        for k in range(len(sites) - 1):
            if sites[k].shape[2] != sites[k + 1].shape[1]:
                raise DimensionMismatchError(
                    f"鍵維度不符: 格點 {k} 右={sites[k].shape[2]}，"
                    f"格點 {k + 1} 左={sites[k + 1].shape[1]}")
        for a in sites:
            a.setflags(write=False)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "canonical_form", CanonicalForm(self.canonical_form))

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def bond_dims(self) -> List[int]:
        """內部鍵維度 dim(a_1) … dim(a_{N-1})"""
        return [a.shape[2] for a in self.sites[:-1]]

    @property
    def max_bond(self) -> int:
        return max(self.bond_dims, default=1)


def max_bond_dims(n: int, chi: int) -> List[int]:
    """每個切割的最大鍵維度 min(χ, 2^min(n', N−n'))"""
    return [min(chi, 2 ** min(cut, n - cut)) for cut in range(1, n)]


def product_mps(vectors: Sequence[Sequence[complex]]) -> MatrixProductState:
    """由單位元向量建立乘積態 MPS（不歸一化）"""
    sites = [as_tensor(v, (PHYSICAL_DIM, 1, 1)) for v in vectors]
    return MatrixProductState(tuple(sites))


def _check_chi(chi: Optional[int]):
    if chi is not None and int(chi) < 1:
        raise InvalidConfigError(f"χ 必須 ≥ 1，得到 {chi}")


def _keep_count(s: np.ndarray, chi: Optional[int]) -> int:
    if s.size == 0:
        return 0
    keep = int(np.count_nonzero(s > SVD_CUTOFF * s[0])) if s[0] > 0 else 1
    keep = max(keep, 1)
    if chi is not None:
        keep = min(keep, int(chi))
    return keep


def from_dense(psi: DenseState, chi_max: Optional[int] = None) -> MatrixProductState:
    """
    逐次 SVD 將稠密態分解為 MPS

    Args:
        psi: 歸一化目標態
        chi_max: 鍵維度上限，None 表示不截斷

    Returns:
        右正則、歸一化的 MPS
    """
    _check_chi(chi_max)
    psi.require_normalized()
    n = psi.n_qubits
    sites = []
    rest = psi.amplitudes.reshape(1, -1)
    dl = 1
    for _ in range(n - 1):
        u, s, vh = svd_split(rest.reshape(dl * PHYSICAL_DIM, -1))
        keep = _keep_count(s, chi_max)
        sites.append(u[:, :keep].reshape(dl, PHYSICAL_DIM, keep).transpose(1, 0, 2))
        rest = s[:keep, None] * vh[:keep]
        dl = keep
    sites.append(rest.reshape(dl, PHYSICAL_DIM, 1).transpose(1, 0, 2))
    return canonicalize_right(MatrixProductState(tuple(sites), CanonicalForm.LEFT))


def to_dense(phi: MatrixProductState, cap: Optional[int] = None) -> DenseState:
    """完整縮並張量鏈，結果不另行歸一化；cap 預設取 MPE_DENSE_CAP"""
    cap = config_manager.get_dense_cap() if cap is None else cap
    if phi.n > cap:
        raise InvalidConfigError(f"N={phi.n} 超過稠密上限 {cap}")
    vec = phi.sites[0][:, 0, :]
    for a in phi.sites[1:]:
        vec = np.einsum('ml,slr->msr', vec, a).reshape(-1, a.shape[2])
    return DenseState(phi.n, vec[:, 0])


def canonicalize_right(phi: MatrixProductState) -> MatrixProductState:
    """右正則化並歸一化；鍵維度保持 min(dim 左, 2·dim 右)"""
    sites = [np.array(a) for a in phi.sites]
    for k in range(phi.n - 1, 0, -1):
        _, dl, dr = sites[k].shape
        u, s, vh = svd_split(sites[k].transpose(1, 0, 2).reshape(dl, PHYSICAL_DIM * dr))
        kdim = vh.shape[0]
        sites[k] = vh.reshape(kdim, PHYSICAL_DIM, dr).transpose(1, 0, 2)
        sites[k - 1] = np.einsum('slr,rk->slk', sites[k - 1], u * s[None, :])
    nrm = np.linalg.norm(sites[0])
    if nrm < 1e-300:
        raise NumericalError("零範數 MPS 無法正則化")
    sites[0] = sites[0] / nrm
    return MatrixProductState(tuple(sites), CanonicalForm.RIGHT, center=0)


def right_isometry_residual(phi: MatrixProductState) -> float:
    """max_n ‖Σ_{s,r} A A* − I‖"""
    worst = 0.0
    for a in phi.sites:
        gram = np.einsum('sar,sbr->ab', a, a.conj())
        worst = max(worst, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
    return worst


def is_right_canonical(phi: MatrixProductState, tol: float = ISOMETRY_TOL) -> bool:
    return right_isometry_residual(phi) <= tol


def truncate_to_chi(phi: MatrixProductState, chi: int) -> MatrixProductState:
    """
    由左至右在每個切割保留最大的 χ 個 Schmidt 值

    Returns:
        右正則、歸一化、所有鍵 ≤ χ 的 MPS
    """
    _check_chi(chi)
    if abs(norm(phi) - 1.0) > 1e-8:
        raise InvalidConfigError("truncate_to_chi 需要歸一化的 MPS")
    sites = list(canonicalize_right(phi).sites)
    discarded = 0.0
    for k in range(phi.n - 1):
        _, dl, dr = sites[k].shape
        u, s, vh = svd_split(sites[k].transpose(1, 0, 2).reshape(dl * PHYSICAL_DIM, dr))
        keep = _keep_count(s, chi)
        discarded += float(np.sum(s[keep:] ** 2))
        sites[k] = u[:, :keep].reshape(dl, PHYSICAL_DIM, keep).transpose(1, 0, 2)
        sites[k + 1] = np.einsum('ab,sbr->sar', s[:keep, None] * vh[:keep], sites[k + 1])
    logger.debug(f"截斷至 χ={chi}，捨棄權重總和 {discarded:.3e}")
    return canonicalize_right(MatrixProductState(tuple(sites), CanonicalForm.LEFT))


def overlap(a: MatrixProductState, b: MatrixProductState) -> complex:
    """拉鍊式縮並計算 ⟨a|b⟩"""
    if a.n != b.n:
        raise DimensionMismatchError(f"MPS 長度不符: {a.n} 與 {b.n}")
    env = np.ones((1, 1), dtype=np.complex128)
    for x, y in zip(a.sites, b.sites):
        env = np.einsum('ab,sac,sbd->cd', env, x.conj(), y)
    return complex(env[0, 0])


def norm(phi: MatrixProductState) -> float:
    return float(np.sqrt(abs(overlap(phi, phi))))


def _check_cut(n: int, cut: int):
    if not 1 <= cut <= n - 1:
        raise InvalidConfigError(f"切割位置必須在 1…{n - 1}，得到 {cut}")


def schmidt_values(phi: MatrixProductState, cut: int) -> np.ndarray:
    """切割 (1…n') | (n'+1…N) 的 Schmidt 係數，遞減"""
    _check_cut(phi.n, cut)
    right = canonicalize_right(phi)
    c = right.sites[0]
    for k in range(cut):
        _, dl, dr = c.shape
        mat = c.transpose(1, 0, 2).reshape(dl * PHYSICAL_DIM, dr)
        if k == cut - 1:
            return singular_values(mat)
        _, r = np.linalg.qr(mat)
        c = np.einsum('ab,sbr->sar', r, right.sites[k + 1])
    raise AssertionError("unreachable")


def entropy_from_schmidt(s: np.ndarray) -> float:
    """−Σ λ² log₂ λ²（bits）"""
    p = np.asarray(s, dtype=float) ** 2
    total = p.sum()
    if total <= 0:
        raise NumericalError("Schmidt 權重總和為零")
    p = p[p > 0] / total
    return max(0.0, float(-np.sum(p * np.log2(p))))


def entanglement_entropy(phi: MatrixProductState, cut: int) -> float:
    """雙分糾纏熵（bits）"""
    return entropy_from_schmidt(schmidt_values(phi, cut))


def entanglement_profile(phi: MatrixProductState) -> List[float]:
    """每個切割的糾纏熵"""
    return [entanglement_entropy(phi, cut) for cut in range(1, phi.n)]


def dense_schmidt_values(psi: DenseState, cut: int) -> np.ndarray:
    """直接由稠密向量計算 Schmidt 係數"""
    _check_cut(psi.n_qubits, cut)
    return singular_values(psi.amplitudes.reshape(2 ** cut, -1))


def half_chain_entropy(psi: DenseState) -> float:
    """對稱切割（n' = ⌊N/2⌋）的糾纏熵"""
    return entropy_from_schmidt(dense_schmidt_values(psi, psi.n_qubits // 2))


def random_mps(n: int, chi: int, seed=None) -> MatrixProductState:
    """
    隨機複高斯張量經右正則化

    鍵維度恰為 min(χ, 2^min(n', N−n'))，給定種子即可重現
    """
    _check_chi(chi)
    if n < 1:
        raise InvalidConfigError(f"量子位元數必須為正: {n}")
    rng = np.random.default_rng(seed)
    dims = [1] + max_bond_dims(n, chi) + [1]
    sites = []
    for k in range(n):
        shape = (PHYSICAL_DIM, dims[k], dims[k + 1])
        sites.append(rng.normal(size=shape) + 1j * rng.normal(size=shape))
    return canonicalize_right(MatrixProductState(tuple(sites)))


def expand_bonds(phi: MatrixProductState, chi: int) -> MatrixProductState:
    """以零填充把每個鍵擴到 min(χ, 2^min(n', N−n'))，再右正則化"""
    _check_chi(chi)
    targets = [1] + [max(cur, tgt) for cur, tgt in zip(phi.bond_dims, max_bond_dims(phi.n, chi))] + [1]
    sites = []
    for k, a in enumerate(phi.sites):
        padded = np.zeros((PHYSICAL_DIM, targets[k], targets[k + 1]), dtype=np.complex128)
        padded[:, :a.shape[1], :a.shape[2]] = a
        sites.append(padded)
    return canonicalize_right(MatrixProductState(tuple(sites)))
