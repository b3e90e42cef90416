# core/events.py
"""
實驗結果模型
定義掃描記錄、線性擬合報告與深度表格的數據結構
"""

import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .constants import OUTCOME_OK, OUTCOME_ORTHOGONAL, SCALING_CHOICES


class ScalingRecord(BaseModel):
    """單一 (D, χ, σ, seed) 的 E_χ 與 F"""
    model_config = ConfigDict(frozen=True)

    depth: int = Field(ge=1, description="線路層數 D")
    chi: int = Field(ge=1, description="虛擬鍵維度 χ")
    sigma: float = Field(ge=0, description="RPS 高斯標準差")
    mu: float = Field(description="RPS 高斯平均值")
    seed: int = Field(ge=0, description="目標態種子")
    F_bits: float = Field(description="負對數保真度（bits）")
    E_bits: float = Field(description="χ-MPE（bits）")
    f_converged: bool = Field(default=True, description="線路擬合是否收斂")
    e_converged: bool = Field(default=True, description="χ-MPE 掃描是否收斂")
    outcome: str = Field(default=OUTCOME_OK, description="ok 或 orthogonal")

    @field_validator("F_bits", "E_bits")
    @classmethod
    def _non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f"距離不可為負: {v}")
        return v

    @field_validator("outcome")
    @classmethod
    def _known_outcome(cls, v: str) -> str:
        if v not in (OUTCOME_OK, OUTCOME_ORTHOGONAL):
            raise ValueError(f"未知的結果類型: {v}")
        return v

    @property
    def key(self):
        return (self.depth, self.sigma, self.seed, self.chi)

    @property
    def is_finite(self) -> bool:
        return self.outcome == OUTCOME_OK and math.isfinite(self.F_bits) and math.isfinite(self.E_bits)

    def csv_row(self) -> List:
        return [
            self.depth, self.chi, repr(self.sigma), repr(self.mu), self.seed,
            repr(self.F_bits), repr(self.E_bits),
            self.f_converged, self.e_converged,
        ]


class FitReport(BaseModel):
    """E_χ 對 F 的最小平方擬合"""
    slope: float = Field(description="含截距 OLS 斜率 k")
    intercept: float
    r_squared: float = Field(description="決定係數 R²")
    n_points: int = Field(ge=3)
    chi: Optional[int] = None
    depth: Optional[int] = None
    classification: str
    slope_through_origin: float = Field(description="過原點斜率")
    slope_stderr: float = Field(description="斜率標準誤")
    upper_tercile_positive: int = Field(default=0, description="上三分位殘差為正的點數")
    upper_tercile_negative: int = Field(default=0, description="上三分位殘差為負的點數")

    @field_validator("classification")
    @classmethod
    def _known_class(cls, v: str) -> str:
        if v not in {c for c, _ in SCALING_CHOICES}:
            raise ValueError(f"未知的標度分類: {v}")
        return v


class DepthChiRow(BaseModel):
    """深度 → 線性 χ 集合"""
    depth: int = Field(ge=1)
    linear_chis: List[int] = Field(default_factory=list, description="R² 超過門檻的 χ")
    argmax_chi: int = Field(description="R² 最大的 χ")
    r_squared: Dict[int, float] = Field(default_factory=dict)
    reference_chis: List[int] = Field(default_factory=list)
    within_reference: Optional[bool] = None


class DepthStudyRow(BaseModel):
    """隨機 χ-MPS 在深度 D 下的擬合誤差"""
    chi: int = Field(ge=1)
    depth: int = Field(ge=1)
    sample: int = Field(ge=0)
    F_bits: float = Field(ge=0)
    converged: bool = True
