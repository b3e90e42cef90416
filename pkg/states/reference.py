# states/reference.py
"""具名參考態：乘積態、計算基底、GHZ、W、Bell"""

from typing import Sequence

import numpy as np

from core.exceptions import InvalidConfigError
from mps.state import DenseState


def product_state(thetas: Sequence[float], phis: Sequence[float] = None) -> DenseState:
    """⊗ (cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩)"""
    thetas = list(thetas)
    if not thetas:
        raise InvalidConfigError("至少需要一個位元")
    phis = list(phis) if phis is not None else [0.0] * len(thetas)
    if len(phis) != len(thetas):
        raise InvalidConfigError(f"θ 與 φ 長度不同: {len(thetas)} 與 {len(phis)}")
    vec = np.ones(1, dtype=np.complex128)
    for theta, phi in zip(thetas, phis):
        vec = np.kron(vec, [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    return DenseState(len(thetas), vec)


def basis_state(bits: str) -> DenseState:
    """計算基底態，例如 "0110"（第一個字元為 s1）"""
    if not bits or set(bits) - {"0", "1"}:
        raise InvalidConfigError(f"基底字串只能包含 0 與 1: '{bits}'")
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return DenseState(len(bits), amps)


def ghz_state(n: int) -> DenseState:
    if n < 2:
        raise InvalidConfigError(f"GHZ 態至少需要 2 個位元，得到 {n}")
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return DenseState(n, amps)


def w_state(n: int) -> DenseState:
    if n < 2:
        raise InvalidConfigError(f"W 態至少需要 2 個位元，得到 {n}")
    amps = np.zeros(2 ** n, dtype=np.complex128)
    for k in range(n):
        amps[1 << k] = 1 / np.sqrt(n)
    return DenseState(n, amps)


def bell_state() -> DenseState:
    """(|00⟩ + |11⟩)/√2"""
    return ghz_state(2)
