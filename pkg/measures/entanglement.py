# measures/entanglement.py
"""
糾纏度量
幾何糾纏（暴力驗證）、χ-MPE 變分掃描、負對數保真度
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from core.config import GeOracleOptions, MpeOptions
from core.constants import ORACLE_QUBIT_CAP, ORTHOGONAL_OVERLAP, PHYSICAL_DIM
from core.exceptions import InvalidConfigError, OrthogonalOutcomeError
from mps.state import (
    CanonicalForm,
    DenseState,
    MatrixProductState,
    expand_bonds,
    from_dense,
    random_mps,
    truncate_to_chi,
)

logger = logging.getLogger(__name__)


def distance_bits(overlap_abs: float) -> float:
    """−log₂|⟨ψ|φ⟩|²；重疊為零時回傳 inf"""
    if overlap_abs <= 0.0:
        return math.inf
    return max(0.0, -2.0 * math.log2(overlap_abs))


@dataclass
class MpeResult:
    """χ-MPE 結果"""
    chi: int
    value_bits: float
    best_mps: MatrixProductState
    restarts_used: int
    sweeps_used: int
    converged: bool
    overlap: float = 0.0
    best_restart: int = 0
    restart_values: List[float] = field(default_factory=list)
    history: List[float] = field(default_factory=list)


@dataclass
class _RestartOutcome:
    index: int
    value_bits: float
    overlap: float
    mps: MatrixProductState
    sweeps: int
    converged: bool
    history: List[float]


def _left_block(left: np.ndarray, a: np.ndarray) -> np.ndarray:
    """(X, dl) ⊗ A → (2X, dr)"""
    return np.einsum('xl,slr->xsr', left, a).reshape(-1, a.shape[2])


def _right_block(a: np.ndarray, right: np.ndarray) -> np.ndarray:
    """A ⊗ (dr, Y) → (dl, 2Y)"""
    return np.einsum('slr,ry->lsy', a, right).reshape(a.shape[1], -1)


def _site_environment(amps: np.ndarray, n: int, k: int,
                      left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """ψ 對固定左右區塊的環境張量 Env[s, l, r]，⟨Φ|ψ⟩ = Σ C* · Env"""
    psi3 = amps.reshape(2 ** k, PHYSICAL_DIM, 2 ** (n - k - 1))
    tmp = np.tensordot(left.conj(), psi3, axes=(0, 0))
    env = np.tensordot(tmp, right.conj(), axes=(2, 1))
    return env.transpose(1, 0, 2)


class _SiteSweeper:
    """單一重啟的交替單格點掃描（混合正則規範）"""

    def __init__(self, psi: DenseState, start: MatrixProductState):
        self.amps = psi.amplitudes
        self.n = psi.n_qubits
        self.sites = [np.array(a) for a in start.sites]
        one = np.ones((1, 1), dtype=np.complex128)
        self.left = [one] + [None] * (self.n - 1)
        self.right = [None] * (self.n - 1) + [one]
        for k in range(self.n - 1, 0, -1):
            self.right[k - 1] = _right_block(self.sites[k], self.right[k])

    def _optimal_center(self, k: int):
        env = _site_environment(self.amps, self.n, k, self.left[k], self.right[k])
        size = float(np.linalg.norm(env))
        if size < 1e-300:
            current = self.sites[k]
            return current / max(np.linalg.norm(current), 1e-300), 0.0
        return env / size, size

    def current_overlap(self) -> float:
        env = _site_environment(self.amps, self.n, 0, self.left[0], self.right[0])
        return float(abs(np.vdot(self.sites[0], env)))

    def sweep(self) -> float:
        n = self.n
        for k in range(n - 1):
            center, _ = self._optimal_center(k)
            _, dl, dr = center.shape
            q, _ = np.linalg.qr(center.transpose(1, 0, 2).reshape(dl * PHYSICAL_DIM, dr))
            self.sites[k] = q.reshape(dl, PHYSICAL_DIM, q.shape[1]).transpose(1, 0, 2)
            self.left[k + 1] = _left_block(self.left[k], self.sites[k])
        for k in range(n - 1, 0, -1):
            center, _ = self._optimal_center(k)
            _, dl, dr = center.shape
            q, _ = np.linalg.qr(center.transpose(1, 0, 2).reshape(dl, PHYSICAL_DIM * dr).conj().T)
            rows = q.conj().T
            self.sites[k] = rows.reshape(rows.shape[0], PHYSICAL_DIM, dr).transpose(1, 0, 2)
            self.right[k - 1] = _right_block(self.sites[k], self.right[k])
        center, size = self._optimal_center(0)
        self.sites[0] = center
        return size

    def state(self) -> MatrixProductState:
        return MatrixProductState(tuple(self.sites), CanonicalForm.RIGHT, center=0)


def _run_restart(index: int, psi: DenseState, start: MatrixProductState,
                 options: MpeOptions) -> _RestartOutcome:
    sweeper = _SiteSweeper(psi, start)
    value = distance_bits(sweeper.current_overlap())
    history = [value]
    converged = False
    sweeps = 0
    for sweeps in range(1, options.max_sweeps + 1):
        size = sweeper.sweep()
        new_value = distance_bits(size)
        history.append(new_value)
        logger.debug(f"重啟 {index} 掃描 {sweeps}: E={new_value:.12f} bits")
        delta = value - new_value
        value = new_value
        if abs(delta) < options.tol or (math.isinf(value) and sweeps > 1):
            converged = not math.isinf(value)
            break
    overlap = 0.0 if math.isinf(value) else 2.0 ** (-value / 2.0)
    return _RestartOutcome(index, value, overlap, sweeper.state(), sweeps, converged, history)


def _starting_points(psi: DenseState, chi: int, options: MpeOptions,
                     initial: Optional[MatrixProductState]) -> List[MatrixProductState]:
    starts = [expand_bonds(truncate_to_chi(from_dense(psi), chi), chi)]
    if initial is not None:
        if initial.n != psi.n_qubits:
            raise InvalidConfigError(f"初始 MPS 長度 {initial.n} 與 N={psi.n_qubits} 不符")
        if initial.max_bond > chi:
            raise InvalidConfigError(f"初始 MPS 鍵維度 {initial.max_bond} 超過 χ={chi}")
        starts.append(expand_bonds(initial, chi))
    if options.restarts > 1:
        seeds = np.random.SeedSequence(options.seed).generate_state(options.restarts - 1)
        starts.extend(expand_bonds(random_mps(psi.n_qubits, chi, int(s)), chi) for s in seeds)
    return starts


def chi_mpe(psi: DenseState, chi: int, options: MpeOptions = None,
            initial: Optional[MatrixProductState] = None) -> MpeResult:
    """
    χ-MPE：到鍵維度 ≤ χ 的 MPS 流形的最小保真度距離

    Args:
        psi: 歸一化目標態
        chi: 虛擬鍵維度
        options: 重啟、種子與收斂選項
        initial: 額外的暖啟動 MPS（例如 χ−1 的最佳解）

    Returns:
        MpeResult，value_bits 為所有重啟中的最小值
    """
    options = options or MpeOptions()
    if int(chi) < 1:
        raise InvalidConfigError(f"χ 必須 ≥ 1，得到 {chi}")
    psi.require_normalized()
    starts = _starting_points(psi, chi, options, initial)
    logger.info(f"χ-MPE 開始: N={psi.n_qubits}, χ={chi}, 重啟數={len(starts)}")

    jobs = list(enumerate(starts))
    if options.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            outcomes = list(pool.map(lambda job: _run_restart(job[0], psi, job[1], options), jobs))
    else:
        outcomes = [_run_restart(i, psi, start, options) for i, start in jobs]

    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.value_bits < best.value_bits:
            best = outcome

    if best.overlap < ORTHOGONAL_OVERLAP:
        raise OrthogonalOutcomeError(f"χ={chi} 的所有重啟重疊皆為零", overlap=best.overlap)
    if not best.converged:
        logger.warning(f"χ={chi} 最佳重啟 {best.index} 達到掃描上限 {options.max_sweeps} 未收斂")

    logger.info(f"χ-MPE 完成: χ={chi}, E={best.value_bits:.10f} bits（重啟 {best.index}）")
    return MpeResult(
        chi=int(chi),
        value_bits=best.value_bits,
        best_mps=best.mps,
        restarts_used=len(outcomes),
        sweeps_used=best.sweeps,
        converged=best.converged,
        overlap=best.overlap,
        best_restart=best.index,
        restart_values=[o.value_bits for o in outcomes],
        history=best.history,
    )


def _product_environment(t: np.ndarray, vectors: List[np.ndarray], i: int) -> np.ndarray:
    out = t
    for j in reversed(range(t.ndim)):
        if j != i:
            out = np.tensordot(out, vectors[j].conj(), axes=([j], [0]))
    return out


def ge_oracle(psi: DenseState, options: GeOracleOptions = None) -> float:
    """
    幾何糾纏的暴力驗證：單位元座標上升加多次隨機重啟

    Returns:
        min −log₂|⟨ψ|Φ⟩|²（bits），Φ 為乘積態
    """
    options = options or GeOracleOptions()
    n = psi.n_qubits
    if n > ORACLE_QUBIT_CAP:
        raise InvalidConfigError(f"N={n} 超過驗證規模上限 {ORACLE_QUBIT_CAP}")
    psi.require_normalized()
    t = psi.tensor()
    rng = np.random.default_rng(options.seed)
    best = 0.0
    for restart in range(options.restarts):
        vectors = []
        for _ in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            vectors.append(v / np.linalg.norm(v))
        value = 0.0
        for _ in range(options.max_iters):
            previous = value
            for i in range(n):
                env = _product_environment(t, vectors, i)
                size = float(np.linalg.norm(env))
                if size > 0:
                    vectors[i] = env / size
                value = size
            if abs(value - previous) < options.tol:
                break
        best = max(best, value)
        logger.debug(f"幾何糾纏重啟 {restart}: 重疊 {value:.12f}")
    if best < ORTHOGONAL_OVERLAP:
        raise OrthogonalOutcomeError("乘積態重疊為零", overlap=best)
    return distance_bits(best)


def nlf(psi: DenseState, phi: DenseState) -> float:
    """負對數保真度 F = −log₂|⟨ψ|φ⟩|²（bits）"""
    psi.require_normalized()
    phi.require_normalized()
    overlap_abs = abs(psi.inner(phi))
    if overlap_abs < ORTHOGONAL_OVERLAP:
        raise OrthogonalOutcomeError("兩個態正交", overlap=overlap_abs)
    return distance_bits(overlap_abs)
