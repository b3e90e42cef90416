# circuits/staircase.py
"""
階梯線路
稠密態向量模擬、閘環境張量與以極分解更新的保真度最大化
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from core.config import FitOptions
from core.config_manager import config_manager
from core.constants import ORTHOGONAL_OVERLAP, UNITARY_TOL, UNITARY_QUBIT_CAP
from core.exceptions import DimensionMismatchError, InvalidConfigError, NumericalError, OrthogonalOutcomeError
from core.linalg import as_tensor, polar_factor, random_unitary, unitarity_residual
from measures.entanglement import distance_bits
from mps.state import DenseState

logger = logging.getLogger(__name__)

GATE_DIM = 4


@dataclass(frozen=True, eq=False)
class StaircaseCircuit:
    """
    D 層 × (N−1) 個兩位元閘

    gates[d, p] 作用在位元 (p, p+1)，矩陣基底 |q_p q_{p+1}⟩，列為輸出、行為輸入
    """
    n_qubits: int
    depth: int
    gates: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 2:
            raise InvalidConfigError(f"階梯線路至少需要 2 個位元，得到 {self.n_qubits}")
        if self.depth < 1:
            raise InvalidConfigError(f"深度必須 ≥ 1，得到 {self.depth}")
        gates = np.array(as_tensor(self.gates))
        expected = (self.depth, self.n_qubits - 1, GATE_DIM, GATE_DIM)
        if gates.shape != expected:
            raise DimensionMismatchError(f"閘陣列形狀 {gates.shape}，預期 {expected}")
        for d in range(self.depth):
            for p in range(self.n_qubits - 1):
                residual = unitarity_residual(gates[d, p])
                if residual > UNITARY_TOL:
                    raise NumericalError(f"閘 ({d}, {p}) 非么正，殘差 {residual:.3e}")
        gates.setflags(write=False)
        object.__setattr__(self, "gates", gates)

    @property
    def gate_count(self) -> int:
        return self.depth * (self.n_qubits - 1)

    def gate(self, layer: int, pos: int) -> np.ndarray:
        self._check_index(layer, pos)
        return self.gates[layer, pos]

    def with_gate(self, layer: int, pos: int, gate: np.ndarray) -> "StaircaseCircuit":
        self._check_index(layer, pos)
        gates = np.array(self.gates)
        gates[layer, pos] = gate
        return StaircaseCircuit(self.n_qubits, self.depth, gates)

    def flat_gates(self) -> List[np.ndarray]:
        """依施加順序（層內位置遞增）排列的閘"""
        return [np.array(self.gates[d, p]) for d in range(self.depth) for p in range(self.n_qubits - 1)]

    def _check_index(self, layer: int, pos: int):
        if not (0 <= layer < self.depth and 0 <= pos < self.n_qubits - 1):
            raise InvalidConfigError(
                f"閘索引 ({layer}, {pos}) 超出範圍（D={self.depth}, N={self.n_qubits}）")


def _from_flat(n: int, depth: int, flat: List[np.ndarray]) -> StaircaseCircuit:
    return StaircaseCircuit(n, depth, np.array(flat).reshape(depth, n - 1, GATE_DIM, GATE_DIM))


def zero_state(n: int) -> DenseState:
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = 1.0
    return DenseState(n, amps)


def _apply_gate(block: np.ndarray, gate: np.ndarray, pos: int, n: int) -> np.ndarray:
    """對 (2^N, B) 的每一行施加作用在位元 (pos, pos+1) 的閘"""
    batch = block.shape[1]
    view = block.reshape(2 ** pos, GATE_DIM, 2 ** (n - pos - 2), batch)
    out = np.tensordot(gate, view, axes=(1, 1)).transpose(1, 0, 2, 3)
    return out.reshape(2 ** n, batch)


def _apply_vec(vec: np.ndarray, gate: np.ndarray, pos: int, n: int) -> np.ndarray:
    return _apply_gate(vec.reshape(-1, 1), gate, pos, n)[:, 0]


def _positions(n: int, depth: int) -> List[int]:
    return [p for _ in range(depth) for p in range(n - 1)]


def apply_circuit(c: StaircaseCircuit, state: Optional[DenseState] = None,
                  cap: Optional[int] = None) -> DenseState:
    """逐層、層內由左至右施加閘；預設輸入 |0…0⟩，cap 預設取 MPE_DENSE_CAP"""
    cap = config_manager.get_dense_cap() if cap is None else cap
    state = state if state is not None else zero_state(c.n_qubits)
    if state.n_qubits != c.n_qubits:
        raise DimensionMismatchError(f"位元數不符: 線路 {c.n_qubits}，態 {state.n_qubits}")
    if c.n_qubits > cap:
        raise InvalidConfigError(f"N={c.n_qubits} 超過稠密上限 {cap}")
    vec = np.array(state.amplitudes)
    for gate, pos in zip(c.flat_gates(), _positions(c.n_qubits, c.depth)):
        vec = _apply_vec(vec, gate, pos, c.n_qubits)
    return DenseState(c.n_qubits, vec)


def circuit_unitary(c: StaircaseCircuit) -> np.ndarray:
    """完整的 2^N × 2^N 線路矩陣（N ≤ 10）"""
    if c.n_qubits > UNITARY_QUBIT_CAP:
        raise InvalidConfigError(f"N={c.n_qubits} 超過矩陣上限 {UNITARY_QUBIT_CAP}")
    block = np.eye(2 ** c.n_qubits, dtype=np.complex128)
    for gate, pos in zip(c.flat_gates(), _positions(c.n_qubits, c.depth)):
        block = _apply_gate(block, gate, pos, c.n_qubits)
    return block


def random_circuit(n: int, depth: int, seed=None) -> StaircaseCircuit:
    """每個閘為隨機複矩陣的 QR 正交化"""
    if depth < 1:
        raise InvalidConfigError(f"深度必須 ≥ 1，得到 {depth}")
    rng = np.random.default_rng(seed)
    flat = [random_unitary(GATE_DIM, rng) for _ in range(depth * (n - 1))]
    return _from_flat(n, depth, flat)


def identity_circuit(n: int, depth: int) -> StaircaseCircuit:
    gates = np.broadcast_to(np.eye(GATE_DIM, dtype=np.complex128), (depth, n - 1, GATE_DIM, GATE_DIM))
    return StaircaseCircuit(n, depth, gates)


def pad_layers(c: StaircaseCircuit, extra: int) -> StaircaseCircuit:
    """在線路末端補上單位閘層，準備出的態不變"""
    if extra < 0:
        raise InvalidConfigError(f"補層數不可為負: {extra}")
    if extra == 0:
        return c
    pad = identity_circuit(c.n_qubits, extra).gates
    return StaircaseCircuit(c.n_qubits, c.depth + extra, np.concatenate([c.gates, pad], axis=0))


def _environment(alpha: np.ndarray, beta: np.ndarray, pos: int, n: int) -> np.ndarray:
    """E[in, out] = Σ α[x, in, y] β*[x, out, y]，使得 ⟨β|G|α⟩ = tr(G·E)"""
    shape = (2 ** pos, GATE_DIM, 2 ** (n - pos - 2))
    return np.einsum('xiy,xoy->io', alpha.reshape(shape), beta.reshape(shape).conj())


def gate_environment(c: StaircaseCircuit, psi: DenseState, layer: int, pos: int) -> np.ndarray:
    """
    閘 (layer, pos) 在 ⟨ψ|Φ_D⟩ 中的線性係數

    其餘閘固定時，以任意 W 取代該閘得到 ⟨ψ|Φ_D⟩ = tr(W·E)
    """
    c._check_index(layer, pos)
    if psi.n_qubits != c.n_qubits:
        raise DimensionMismatchError(f"位元數不符: 線路 {c.n_qubits}，態 {psi.n_qubits}")
    n = c.n_qubits
    flat = c.flat_gates()
    positions = _positions(n, c.depth)
    target = layer * (n - 1) + pos
    alpha = np.array(zero_state(n).amplitudes)
    for k in range(target):
        alpha = _apply_vec(alpha, flat[k], positions[k], n)
    beta = np.array(psi.amplitudes)
    for k in range(len(flat) - 1, target, -1):
        beta = _apply_vec(beta, flat[k].conj().T, positions[k], n)
    return _environment(alpha, beta, pos, n)


@dataclass
class FitResult:
    """線路擬合結果；可解包為 (circuit, f_bits)"""
    circuit: StaircaseCircuit
    f_bits: float
    converged: bool
    sweeps_used: int
    restarts_used: int
    best_restart: int = 0
    restart_values: List[float] = field(default_factory=list)
    history: List[float] = field(default_factory=list)

    def __iter__(self) -> Iterator:
        yield self.circuit
        yield self.f_bits


class _GateSweeper:
    """單一重啟的交替閘掃描：每個閘以環境的極分解取代"""

    def __init__(self, psi: DenseState, start: StaircaseCircuit):
        self.n = start.n_qubits
        self.depth = start.depth
        self.psi = np.array(psi.amplitudes)
        self.gates = start.flat_gates()
        self.positions = _positions(self.n, self.depth)
        self.updates: List[float] = []

    def _update(self, k: int, alpha: np.ndarray, beta: np.ndarray) -> float:
        env = _environment(alpha, beta, self.positions[k], self.n)
        gate = polar_factor(env)
        self.gates[k] = gate
        size = float(abs(np.trace(gate @ env)))
        self.updates.append(size)
        return size

    def overlap(self) -> float:
        vec = np.array(zero_state(self.n).amplitudes)
        for gate, pos in zip(self.gates, self.positions):
            vec = _apply_vec(vec, gate, pos, self.n)
        return float(abs(np.vdot(self.psi, vec)))

    def forward(self) -> float:
        count = len(self.gates)
        betas = [None] * count
        beta = self.psi
        for k in range(count - 1, -1, -1):
            betas[k] = beta
            beta = _apply_vec(beta, self.gates[k].conj().T, self.positions[k], self.n)
        alpha = np.array(zero_state(self.n).amplitudes)
        size = 0.0
        for k in range(count):
            size = self._update(k, alpha, betas[k])
            alpha = _apply_vec(alpha, self.gates[k], self.positions[k], self.n)
        return size

    def backward(self) -> float:
        count = len(self.gates)
        alphas = [None] * count
        alpha = np.array(zero_state(self.n).amplitudes)
        for k in range(count):
            alphas[k] = alpha
            alpha = _apply_vec(alpha, self.gates[k], self.positions[k], self.n)
        beta = self.psi
        size = 0.0
        for k in range(count - 1, -1, -1):
            size = self._update(k, alphas[k], beta)
            beta = _apply_vec(beta, self.gates[k].conj().T, self.positions[k], self.n)
        return size

    def circuit(self) -> StaircaseCircuit:
        return _from_flat(self.n, self.depth, self.gates)


def _fit_restart(index: int, psi: DenseState, start: StaircaseCircuit, options: FitOptions):
    sweeper = _GateSweeper(psi, start)
    value = distance_bits(sweeper.overlap())
    history = [value]
    converged = False
    sweeps = 0
    for sweeps in range(1, options.max_sweeps + 1):
        sweeper.forward()
        new_value = distance_bits(sweeper.backward())
        history.append(new_value)
        logger.debug(f"擬合重啟 {index} 掃描 {sweeps}: F={new_value:.12f} bits")
        delta = value - new_value
        value = new_value
        if abs(delta) < options.tol:
            converged = not math.isinf(value)
            break
    return index, value, sweeper.circuit(), sweeps, converged, history


def fit_circuit(psi: DenseState, depth: int, options: FitOptions = None,
                initial: Optional[StaircaseCircuit] = None) -> FitResult:
    """
    擬合 D 層階梯線路以最大化 |⟨ψ|Φ_D⟩|

    Args:
        psi: 歸一化目標態
        depth: 層數 D
        options: 重啟、種子與收斂選項
        initial: 暖啟動線路（作為第 0 次重啟）

    Returns:
        FitResult，f_bits = nlf(psi, apply_circuit(best))
    """
    options = options or FitOptions()
    psi.require_normalized()
    n = psi.n_qubits
    if depth < 1:
        raise InvalidConfigError(f"深度必須 ≥ 1，得到 {depth}")
    if n < 2:
        raise InvalidConfigError("線路擬合至少需要 2 個位元")

    starts = []
    if initial is not None:
        if initial.n_qubits != n or initial.depth != depth:
            raise InvalidConfigError(
                f"暖啟動線路 (N={initial.n_qubits}, D={initial.depth}) 與 (N={n}, D={depth}) 不符")
        starts.append(initial)
    seeds = np.random.SeedSequence(options.seed).generate_state(options.restarts)
    starts.extend(random_circuit(n, depth, int(s)) for s in seeds)
    logger.info(f"線路擬合開始: N={n}, D={depth}, 重啟數={len(starts)}")

    jobs = list(enumerate(starts))
    if options.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            outcomes = list(pool.map(lambda job: _fit_restart(job[0], psi, job[1], options), jobs))
    else:
        outcomes = [_fit_restart(i, psi, start, options) for i, start in jobs]

    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome[1] < best[1]:
            best = outcome
    index, _, circuit, sweeps, converged, history = best

    prepared = apply_circuit(circuit)
    overlap_abs = abs(psi.inner(prepared))
    if overlap_abs < ORTHOGONAL_OVERLAP:
        raise OrthogonalOutcomeError(f"D={depth} 的所有重啟重疊皆為零", overlap=overlap_abs)
    f_bits = distance_bits(overlap_abs)
    if not converged:
        logger.warning(f"D={depth} 最佳重啟 {index} 達到掃描上限 {options.max_sweeps} 未收斂")
    logger.info(f"線路擬合完成: D={depth}, F={f_bits:.10f} bits（重啟 {index}）")
    return FitResult(
        circuit=circuit,
        f_bits=f_bits,
        converged=converged,
        sweeps_used=sweeps,
        restarts_used=len(outcomes),
        best_restart=index,
        restart_values=[o[1] for o in outcomes],
        history=history,
    )


def fit_circuit_ladder(psi: DenseState, max_depth: int, options: FitOptions = None) -> List[FitResult]:
    """依序擬合 D = 1…max_depth，每一層以前一層的解補一層單位閘暖啟動"""
    if max_depth < 1:
        raise InvalidConfigError(f"最大深度必須 ≥ 1，得到 {max_depth}")
    results: List[FitResult] = []
    for depth in range(1, max_depth + 1):
        initial = pad_layers(results[-1].circuit, 1) if results else None
        results.append(fit_circuit(psi, depth, options, initial=initial))
    return results
