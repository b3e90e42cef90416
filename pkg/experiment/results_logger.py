# experiment/results_logger.py
"""
實驗結果輸出
掃描記錄寫成 CSV，擬合報告與實驗設定寫成 JSON
"""

import csv
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from core.constants import (
    LAYER_LAYOUT,
    LIBRARY_VERSION,
    LOG_BASE,
    RPS_AMPLITUDE_CONVENTION,
    SCALING_CSV_HEADER,
)
from core.events import DepthChiRow, FitReport, ScalingRecord
from core.exceptions import ResultIOError
from core.fileio import write_json

logger = logging.getLogger(__name__)


def write_records_csv(records: Sequence[ScalingRecord], csv_path):
    """寫入 CSV；同樣的記錄總是產生逐位元組相同的檔案"""
    try:
        Path(csv_path).parent.mkdir(parents=True, exist_ok=True)
        with open(csv_path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(SCALING_CSV_HEADER)
            for record in records:
                writer.writerow(record.csv_row())
    except OSError as e:
        raise ResultIOError(csv_path, e) from e
    logger.info(f"已寫入 {len(records)} 筆記錄: {csv_path}")


def build_report(reports: Sequence[FitReport], config: Optional[Dict[str, Any]] = None,
                 table: Optional[Sequence[DepthChiRow]] = None, n_records: int = 0) -> Dict[str, Any]:
    """JSON 報告內容：擬合係數、分類、設定回顯與計算慣例"""
    payload = {
        "version": LIBRARY_VERSION,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "metadata": {
            "log_base": LOG_BASE,
            "units": "bits",
            "rps_convention": RPS_AMPLITUDE_CONVENTION,
            "layer_layout": LAYER_LAYOUT,
        },
        "config": config or {},
        "n_records": n_records,
        "fits": [r.model_dump() for r in reports],
    }
    if table is not None:
        payload["table"] = [row.model_dump() for row in table]
    return payload


def emit_results(records: Sequence[ScalingRecord], reports: Sequence[FitReport], csv_path,
                 report_path=None, config: Optional[Dict[str, Any]] = None,
                 table: Optional[Sequence[DepthChiRow]] = None):
    """寫出 CSV 與（選用的）JSON 報告"""
    write_records_csv(records, csv_path)
    if report_path is not None:
        write_json(report_path, build_report(reports, config, table, n_records=len(records)))
