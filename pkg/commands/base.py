# commands/base.py
"""
子命令基底類別
仿照管理命令的 help / add_arguments / handle 結構，以 argparse 實作
"""

import argparse
import logging
import sys
from typing import Any, Dict, Optional

from core.config import FitOptions, GeOracleOptions, MpeOptions, build_options
from core.config_manager import config_manager

logger = logging.getLogger(__name__)


class OutputWrapper:
    """只有命令會寫到 stdout"""

    def __init__(self, stream=None):
        self._stream = stream

    def write(self, msg: str = ""):
        stream = self._stream or sys.stdout
        stream.write(msg if msg.endswith("\n") else msg + "\n")


class BaseCommand:
    help = ""

    def __init__(self, stdout=None):
        self.stdout = OutputWrapper(stdout)

    def add_arguments(self, parser: argparse.ArgumentParser):
        pass

    def handle(self, **options) -> Optional[int]:
        raise NotImplementedError("子命令必須實作 handle()")

    # --- 共用選項 ---

    @staticmethod
    def add_optimizer_arguments(parser: argparse.ArgumentParser, prefix: str = ""):
        parser.add_argument(f"--{prefix}restarts", type=int, help="重啟次數")
        parser.add_argument(f"--{prefix}seed", type=int, help="隨機重啟種子")
        parser.add_argument(f"--{prefix}max-sweeps", type=int, help="每次重啟的最大掃描數")
        parser.add_argument(f"--{prefix}tol", type=float, help="收斂門檻（bits）")

    @staticmethod
    def _pick(options: Dict[str, Any], prefix: str) -> Dict[str, Any]:
        key = prefix.replace("-", "_")
        return {
            "restarts": options.get(f"{key}restarts"),
            "seed": options.get(f"{key}seed"),
            "max_sweeps": options.get(f"{key}max_sweeps"),
            "tol": options.get(f"{key}tol"),
            "workers": options.get(f"{key}workers"),
        }

    def mpe_options(self, options: Dict[str, Any], prefix: str = "") -> MpeOptions:
        """命令列 → 環境變數/設定檔 → 預設值"""
        values = {**config_manager.get_mpe_config(), **_drop_none(self._pick(options, prefix))}
        return build_options(MpeOptions, **values)

    def fit_options(self, options: Dict[str, Any], prefix: str = "") -> FitOptions:
        values = {**config_manager.get_fit_config(), **_drop_none(self._pick(options, prefix))}
        return build_options(FitOptions, **values)

    def ge_options(self, options: Dict[str, Any]) -> GeOracleOptions:
        picked = self._pick(options, "")
        values = {**config_manager.get_ge_config(), **_drop_none({
            "restarts": picked["restarts"],
            "seed": picked["seed"],
            "max_iters": options.get("max_iters"),
            "tol": picked["tol"],
        })}
        return build_options(GeOracleOptions, **values)


def _drop_none(values: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in values.items() if v is not None}
