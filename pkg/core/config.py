# core/config.py
"""
選項與實驗配置模型
以 pydantic 驗證，驗證失敗統一轉為 InvalidConfigError
"""

from typing import List, Optional, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .constants import DENSE_QUBIT_CAP, DEFAULT_MU, DEFAULT_SEEDS_PER_SIGMA, DEFAULT_SIGMA_GRID, R2_LINEAR_THRESHOLD
from .exceptions import InvalidConfigError

T = TypeVar("T", bound=BaseModel)


class _Options(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class MpeOptions(_Options):
    """χ-MPE 變分掃描選項"""
    restarts: int = Field(default=10, ge=1, description="重啟次數（第 0 次由截斷初始化）")
    seed: int = Field(default=0, ge=0, description="隨機重啟的種子")
    max_sweeps: int = Field(default=500, ge=1, description="每次重啟的最大掃描數")
    tol: float = Field(default=1e-10, gt=0, description="收斂門檻（bits）")
    workers: int = Field(default=1, ge=1, description="並行重啟數")


class GeOracleOptions(_Options):
    """幾何糾纏暴力驗證選項"""
    restarts: int = Field(default=50, ge=1)
    seed: int = Field(default=0, ge=0)
    max_iters: int = Field(default=2000, ge=1)
    tol: float = Field(default=1e-13, gt=0)


class FitOptions(_Options):
    """階梯線路擬合選項"""
    restarts: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0)
    max_sweeps: int = Field(default=300, ge=1)
    tol: float = Field(default=1e-9, gt=0, description="|ΔF| 收斂門檻（bits）")
    workers: int = Field(default=1, ge=1)


def parse_sigma_grid(spec: Union[str, List[float]]) -> List[float]:
    """
    解析 σ 網格

    支援 "log:a:b:k"（對數等距）、"lin:a:b:k"（線性等距）或 "0.5,1,2"
    """
    if isinstance(spec, (list, tuple)):
        values = [float(v) for v in spec]
    else:
        text = str(spec).strip()
        try:
            if text.startswith(("log:", "lin:")):
                kind, a, b, k = text.split(":")
                a, b, k = float(a), float(b), int(k)
                if k < 1:
                    raise InvalidConfigError(f"σ 網格點數必須 ≥ 1: {spec}")
                if kind == "log":
                    if a <= 0 or b <= 0:
                        raise InvalidConfigError(f"對數網格端點必須為正: {spec}")
                    values = np.geomspace(a, b, k).tolist()
                else:
                    values = np.linspace(a, b, k).tolist()
            else:
                values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError as e:
            raise InvalidConfigError(f"無法解析 σ 網格 '{spec}': {e}") from e
    if not values:
        raise InvalidConfigError("σ 網格為空")
    if any(v < 0 for v in values):
        raise InvalidConfigError(f"σ 不可為負: {values}")
    return values


def parse_int_list(text: Union[str, List[int]]) -> List[int]:
    """解析 "1,2,3" 形式的整數列表"""
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as e:
        raise InvalidConfigError(f"無法解析整數列表 '{text}': {e}") from e


class ScanConfig(_Options):
    """(D, χ, σ) 標度掃描配置"""
    n: int = Field(ge=2, description="量子位元數")
    depths: List[int] = Field(min_length=1)
    chis: List[int] = Field(min_length=1)
    sigma_grid: Union[str, List[float]] = DEFAULT_SIGMA_GRID
    mu: float = DEFAULT_MU
    seeds: int = Field(default=DEFAULT_SEEDS_PER_SIGMA, ge=1, description="每個 σ 的樣本數")
    base_seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    dense_cap: int = Field(default=DENSE_QUBIT_CAP, ge=2)
    mpe: MpeOptions = MpeOptions()
    fit: FitOptions = FitOptions()

    @field_validator("depths", "chis")
    @classmethod
    def _positive(cls, values: List[int]) -> List[int]:
        if any(v < 1 for v in values):
            raise ValueError("深度與 χ 必須 ≥ 1")
        return sorted(set(values))

    @model_validator(mode="after")
    def _check(self):
        if self.n > self.dense_cap:
            raise ValueError(f"N={self.n} 超過稠密上限 {self.dense_cap}")
        parse_sigma_grid(self.sigma_grid)
        return self

    def sigmas(self) -> List[float]:
        return parse_sigma_grid(self.sigma_grid)

    def rps_seed(self, sigma_index: int, sample: int) -> int:
        """
        每個 (σ, 樣本) 的目標態種子，與深度無關

        由 SeedSequence([base_seed, σ 索引, 樣本]) 導出，取 63 位元以便寫入 CSV
        """
        high, low = np.random.SeedSequence([self.base_seed, sigma_index, sample]).generate_state(2)
        return (int(high) << 31) | (int(low) >> 1)


class TableConfig(_Options):
    """深度 → χ 表格配置；由既有 CSV 重建時可省略 n"""
    n: Optional[int] = Field(default=None, ge=2)
    max_depth: int = Field(default=6, ge=1)
    max_chi: int = Field(default=9, ge=1)
    r2_threshold: float = Field(default=R2_LINEAR_THRESHOLD, gt=0, le=1)
    sigma_grid: Union[str, List[float]] = DEFAULT_SIGMA_GRID
    mu: float = DEFAULT_MU
    seeds: int = Field(default=DEFAULT_SEEDS_PER_SIGMA, ge=1)
    base_seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    dense_cap: int = Field(default=DENSE_QUBIT_CAP, ge=2)
    mpe: MpeOptions = MpeOptions()
    fit: FitOptions = FitOptions()

    def to_scan_config(self) -> ScanConfig:
        if self.n is None:
            raise InvalidConfigError("執行掃描需要指定 n")
        return build_options(
            ScanConfig,
            n=self.n,
            depths=list(range(1, self.max_depth + 1)),
            chis=list(range(1, self.max_chi + 1)),
            sigma_grid=self.sigma_grid,
            mu=self.mu,
            seeds=self.seeds,
            base_seed=self.base_seed,
            workers=self.workers,
            dense_cap=self.dense_cap,
            mpe=self.mpe,
            fit=self.fit,
        )


def build_options(model_cls: Type[T], **kwargs) -> T:
    """建立選項模型，忽略值為 None 的欄位"""
    values = {k: v for k, v in kwargs.items() if v is not None}
    try:
        return model_cls(**values)
    except ValidationError as e:
        raise InvalidConfigError(f"{model_cls.__name__} 配置無效: {e}") from e
