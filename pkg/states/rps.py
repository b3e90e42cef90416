# states/rps.py
"""
廣義隨機純態
振幅實部與虛部獨立取自 N(μ, σ) 後歸一化
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.constants import DEFAULT_MU, page_value_bits
from core.exceptions import InvalidConfigError
from mps.state import DenseState, half_chain_entropy

logger = logging.getLogger(__name__)


class RpsSpec(BaseModel):
    """廣義隨機純態參數"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_qubits: int = Field(ge=1, description="量子位元數")
    mu: float = Field(default=DEFAULT_MU, description="高斯平均值")
    sigma: float = Field(ge=0, description="高斯標準差；0 為均勻振幅的退化情形")
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _not_zero(self):
        if self.sigma == 0 and self.mu == 0:
            raise ValueError("μ 與 σ 同時為 0 時振幅全為零")
        return self

    @classmethod
    def build(cls, **kwargs) -> "RpsSpec":
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidConfigError(f"RPS 參數無效: {e}") from e


def generalized_rps(spec: RpsSpec) -> DenseState:
    """依種子產生歸一化的廣義隨機純態"""
    rng = np.random.default_rng(spec.seed)
    size = 2 ** spec.n_qubits
    re = rng.normal(spec.mu, spec.sigma, size)
    im = rng.normal(spec.mu, spec.sigma, size)
    return DenseState.from_vector(re + 1j * im)


def page_entropy_reference(n: int) -> float:
    """標準隨機純態的平均半鏈糾纏熵 N/2 − 1/(2 ln 2)（bits）"""
    if n < 2 or n % 2:
        raise InvalidConfigError(f"Page 參考值只定義於偶數 N，得到 {n}")
    return page_value_bits(n)


def mean_half_chain_entropy(n: int, samples: int, mu: float = 0.0,
                            sigma: float = 1.0, seed: int = 0) -> float:
    """種子 seed, seed+1, … 的樣本平均半鏈糾纏熵（bits）"""
    if samples < 1:
        raise InvalidConfigError(f"樣本數必須 ≥ 1，得到 {samples}")
    total = 0.0
    for i in range(samples):
        psi = generalized_rps(RpsSpec.build(n_qubits=n, mu=mu, sigma=sigma, seed=seed + i))
        total += half_chain_entropy(psi)
    mean = total / samples
    logger.info(f"半鏈糾纏熵平均: N={n}, μ={mu}, σ={sigma}, 樣本={samples} → {mean:.6f} bits")
    return mean
