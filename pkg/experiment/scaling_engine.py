# experiment/scaling_engine.py
"""
標度實驗引擎
(D, χ, σ) 掃描、E_χ 對 F 的線性擬合、深度 → χ 表格與 MPS 準備深度研究
"""

import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from circuits.staircase import FitResult, fit_circuit, pad_layers
from core.config import FitOptions, ScanConfig, TableConfig
from core.constants import (
    GATED_REFERENCE_DEPTHS,
    OUTCOME_OK,
    OUTCOME_ORTHOGONAL,
    R2_LINEAR_THRESHOLD,
    REFERENCE_LINEAR_CHIS,
    SCALING_CSV_HEADER,
    SCALING_LINEAR,
    SCALING_SUB_LINEAR,
    SCALING_SUPER_LINEAR,
)
from core.events import DepthChiRow, DepthStudyRow, FitReport, ScalingRecord
from core.exceptions import DegenerateFitError, InvalidConfigError, OrthogonalOutcomeError, ResultIOError
from measures.entanglement import chi_mpe
from mps.state import DenseState, random_mps, to_dense
from states.rps import RpsSpec, generalized_rps

logger = logging.getLogger(__name__)


@dataclass
class _TargetOutcome:
    """單一目標態的所有深度與 χ 結果"""
    sigma: float
    seed: int
    fits: Dict[int, Tuple[float, bool, str]] = field(default_factory=dict)
    mpes: Dict[int, Tuple[float, bool, str]] = field(default_factory=dict)


def _fit_depths(psi: DenseState, depths: Sequence[int],
                options: FitOptions) -> Dict[int, Tuple[float, bool, str]]:
    """深度遞增擬合，每個深度以前一深度的解補單位層暖啟動"""
    out = {}
    previous: Optional[FitResult] = None
    for depth in sorted(depths):
        initial = pad_layers(previous.circuit, depth - previous.circuit.depth) if previous else None
        try:
            previous = fit_circuit(psi, depth, options, initial=initial)
            out[depth] = (previous.f_bits, previous.converged, OUTCOME_OK)
        except OrthogonalOutcomeError as e:
            logger.warning(f"D={depth} 擬合結果正交: {e}")
            out[depth] = (math.inf, False, OUTCOME_ORTHOGONAL)
            previous = None
    return out


def _mpe_chis(psi: DenseState, chis: Sequence[int], config: ScanConfig) -> Dict[int, Tuple[float, bool, str]]:
    """χ 遞增計算，每個 χ 以前一 χ 的最佳 MPS 暖啟動，使 E 對 χ 單調"""
    out = {}
    initial = None
    for chi in sorted(chis):
        try:
            result = chi_mpe(psi, chi, config.mpe, initial=initial)
            out[chi] = (result.value_bits, result.converged, OUTCOME_OK)
            initial = result.best_mps
        except OrthogonalOutcomeError as e:
            logger.warning(f"χ={chi} 結果正交: {e}")
            out[chi] = (math.inf, False, OUTCOME_ORTHOGONAL)
            initial = None
    return out


def _run_target(config: ScanConfig, sigma_index: int, sigma: float, sample: int) -> _TargetOutcome:
    seed = config.rps_seed(sigma_index, sample)
    psi = generalized_rps(RpsSpec.build(n_qubits=config.n, mu=config.mu, sigma=sigma, seed=seed))
    outcome = _TargetOutcome(sigma=sigma, seed=seed)
    outcome.fits = _fit_depths(psi, config.depths, config.fit)
    outcome.mpes = _mpe_chis(psi, config.chis, config)
    logger.info(f"目標態完成: σ={sigma:.4g}, seed={seed}")
    return outcome


def scan_scaling(config: ScanConfig) -> List[ScalingRecord]:
    """
    對每個 (σ, 樣本) 產生廣義 RPS，擬合所有深度並計算所有 χ 的 E_χ

    F 與深度無關地重用同一目標態；E_χ 每個 (σ, seed, χ) 只計算一次。
    記錄依 (D, σ, seed, χ) 排序，正交結果以 outcome 標記而非捨棄。
    """
    sigmas = config.sigmas()
    jobs = [(i, sigma, sample) for i, sigma in enumerate(sigmas) for sample in range(config.seeds)]
    logger.info(f"掃描開始: N={config.n}, 深度={config.depths}, χ={config.chis}, "
                f"σ 點數={len(sigmas)}, 目標態數={len(jobs)}")

    if config.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(lambda job: _run_target(config, *job), jobs))
    else:
        outcomes = [_run_target(config, *job) for job in jobs]

    records = []
    for depth in config.depths:
        for target in outcomes:
            f_bits, f_conv, f_outcome = target.fits[depth]
            for chi in config.chis:
                e_bits, e_conv, e_outcome = target.mpes[chi]
                flagged = OUTCOME_ORTHOGONAL in (f_outcome, e_outcome)
                records.append(ScalingRecord(
                    depth=depth, chi=chi, sigma=target.sigma, mu=config.mu, seed=target.seed,
                    F_bits=f_bits, E_bits=e_bits, f_converged=f_conv, e_converged=e_conv,
                    outcome=OUTCOME_ORTHOGONAL if flagged else OUTCOME_OK,
                ))
    records.sort(key=lambda r: r.key)
    logger.info(f"掃描完成: {len(records)} 筆記錄")
    return records


def linear_fit_r2(points: Sequence[Tuple[float, float]], chi: Optional[int] = None,
                  depth: Optional[int] = None, threshold: float = R2_LINEAR_THRESHOLD) -> FitReport:
    """
    含截距最小平方擬合 E = kF + b

    R² 低於門檻時，以上三分位 F 的殘差符號判定超線性或次線性
    """
    data = np.asarray(list(points), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise InvalidConfigError(f"線性擬合至少需要 3 個 (F, E) 點，得到 {len(data)}")
    if not np.all(np.isfinite(data)):
        raise InvalidConfigError("擬合點含有非有限值")
    f, e = data[:, 0], data[:, 1]
    if np.ptp(f) == 0:
        raise DegenerateFitError(f"所有 F 相同（{f[0]}），無法擬合")

    fit = stats.linregress(f, e)
    residuals = e - (fit.intercept + fit.slope * f)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((e - e.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    slope_origin = float(np.dot(f, e) / np.dot(f, f))

    upper = residuals[f >= np.quantile(f, 2.0 / 3.0)]
    positive = int(np.count_nonzero(upper > 0))
    negative = int(np.count_nonzero(upper < 0))
    if r_squared > threshold:
        classification = SCALING_LINEAR
    elif positive != negative:
        classification = SCALING_SUPER_LINEAR if positive > negative else SCALING_SUB_LINEAR
    else:
        classification = SCALING_SUPER_LINEAR if upper.mean() >= 0 else SCALING_SUB_LINEAR

    if r_squared <= threshold:
        logger.warning(f"χ={chi}, D={depth}: R²={r_squared:.6f} 未超過 {threshold}（{classification}）")
    return FitReport(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=r_squared,
        n_points=len(f),
        chi=chi,
        depth=depth,
        classification=classification,
        slope_through_origin=slope_origin,
        slope_stderr=float(fit.stderr),
        upper_tercile_positive=positive,
        upper_tercile_negative=negative,
    )


def fit_records(records: Sequence[ScalingRecord],
                threshold: float = R2_LINEAR_THRESHOLD) -> List[FitReport]:
    """每個 (D, χ) 一份擬合報告；正交記錄不參與擬合"""
    groups: Dict[Tuple[int, int], List[Tuple[float, float]]] = defaultdict(list)
    for r in records:
        if r.is_finite:
            groups[(r.depth, r.chi)].append((r.F_bits, r.E_bits))
    reports = []
    for (depth, chi), points in sorted(groups.items()):
        try:
            reports.append(linear_fit_r2(points, chi=chi, depth=depth, threshold=threshold))
        except (DegenerateFitError, InvalidConfigError) as e:
            logger.warning(f"D={depth}, χ={chi} 無法擬合: {e}")
    return reports


@dataclass
class DepthChiTable:
    rows: List[DepthChiRow]
    reports: List[FitReport]
    records: List[ScalingRecord]


def depth_chi_table(config: TableConfig,
                    records: Optional[Sequence[ScalingRecord]] = None) -> DepthChiTable:
    """
    每個深度下 R² 超過門檻的 χ 集合與 R² 最大的 χ

    records 為 None 時先執行掃描；否則直接使用既有記錄
    """
    if records is None:
        records = scan_scaling(config.to_scan_config())
    records = list(records)
    reports = fit_records(records, config.r2_threshold)

    by_depth: Dict[int, List[FitReport]] = defaultdict(list)
    for report in reports:
        by_depth[report.depth].append(report)

    rows = []
    for depth in sorted(by_depth):
        group = by_depth[depth]
        best = max(group, key=lambda r: (r.r_squared, -r.chi))
        reference = sorted(REFERENCE_LINEAR_CHIS.get(depth, set()))
        within = best.chi in reference if reference else None
        if within is False:
            level = "檢核" if depth in GATED_REFERENCE_DEPTHS else "參考"
            logger.warning(f"D={depth}: R² 最大的 χ={best.chi} 不在{level}集合 {reference} 內")
        rows.append(DepthChiRow(
            depth=depth,
            linear_chis=sorted(r.chi for r in group if r.r_squared > config.r2_threshold),
            argmax_chi=best.chi,
            r_squared={r.chi: r.r_squared for r in group},
            reference_chis=reference,
            within_reference=within,
        ))
        logger.info(f"D={depth}: 線性 χ={rows[-1].linear_chis}，argmax χ={best.chi}")
    return DepthChiTable(rows=rows, reports=reports, records=records)


def mps_depth_study(n: int, chi: int, depths: Sequence[int], samples: int,
                    seed: int = 0, options: FitOptions = None) -> List[DepthStudyRow]:
    """以 D 層階梯線路擬合隨機 χ-MPS，回報每個深度的 F"""
    if samples < 1:
        raise InvalidConfigError(f"樣本數必須 ≥ 1，得到 {samples}")
    if not depths:
        raise InvalidConfigError("至少需要一個深度")
    options = options or FitOptions()
    rows = []
    for sample in range(samples):
        psi = to_dense(random_mps(n, chi, seed + sample))
        for depth, (f_bits, converged, outcome) in sorted(_fit_depths(psi, depths, options).items()):
            if outcome != OUTCOME_OK:
                raise OrthogonalOutcomeError(f"樣本 {sample} 在 D={depth} 的擬合結果正交")
            rows.append(DepthStudyRow(chi=chi, depth=depth, sample=sample, F_bits=f_bits, converged=converged))
        logger.info(f"深度研究樣本 {sample} 完成: χ={chi}")
    return rows


def load_records(csv_path) -> List[ScalingRecord]:
    """讀回掃描 CSV；非有限值的列標記為正交"""
    if not os.path.exists(csv_path):
        raise ResultIOError(csv_path, "檔案不存在")
    try:
        df = pd.read_csv(csv_path, float_precision='round_trip')
    except (OSError, pd.errors.ParserError) as e:
        raise ResultIOError(csv_path, e) from e
    if list(df.columns) != SCALING_CSV_HEADER:
        raise InvalidConfigError(f"{csv_path}: CSV 欄位 {list(df.columns)} 與預期不符")

    records = []
    for row in df.itertuples(index=False):
        f_bits, e_bits = float(row.F_bits), float(row.E_bits)
        finite = math.isfinite(f_bits) and math.isfinite(e_bits)
        records.append(ScalingRecord(
            depth=int(row.depth), chi=int(row.chi), sigma=float(row.sigma), mu=float(row.mu),
            seed=int(row.seed), F_bits=f_bits, E_bits=e_bits,
            f_converged=_as_bool(row.f_converged), e_converged=_as_bool(row.e_converged),
            outcome=OUTCOME_OK if finite else OUTCOME_ORTHOGONAL,
        ))
    logger.info(f"載入 {len(records)} 筆掃描記錄: {csv_path}")
    return records


def _as_bool(value) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ("true", "1", "yes")
    return bool(value)
