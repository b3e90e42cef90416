# core/config_manager.py
# 統一的配置管理模組

import json
import os
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from .constants import DEFAULT_CONFIG, DENSE_QUBIT_CAP
from .exceptions import InvalidConfigError, ResultIOError

logger = logging.getLogger(__name__)

ENV_PREFIX = "MPE_"


class ConfigManager:
    """
    統一的配置管理類別
    整合環境變數、JSON 設定檔、預設配置
    """

    def __init__(self, config_file: Optional[str] = None):
        self._cache: Dict[str, Any] = {}
        self._file_values: Dict[str, Any] = {}
        self.config_file = config_file
        if config_file:
            self.load_file(config_file)

    def load_file(self, path: str):
        """載入 JSON 設定檔（鍵名與 DEFAULT_CONFIG 相同）"""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                raw = json.load(f)
        except OSError as e:
            raise ResultIOError(path, e) from e
        except json.JSONDecodeError as e:
            raise InvalidConfigError(f"設定檔格式錯誤 {path}: {e}") from e
        if not isinstance(raw, dict):
            raise InvalidConfigError(f"設定檔頂層必須是物件: {path}")
        self._file_values = {str(k).upper(): v for k, v in raw.items()}
        self.config_file = str(Path(path))
        self._cache.clear()
        logger.info(f"載入設定檔: {path}（{len(self._file_values)} 項）")

    def get(self, key: str, type=str, default=None) -> Any:
        """
        獲取配置值，優先順序：
        1. 環境變數 MPE_<KEY>
        2. 設定檔
        3. 預設配置
        4. 傳入的預設值
        """
        if key in self._cache:
            return self._cache[key]

        env_key = key if key.startswith(ENV_PREFIX) else f"{ENV_PREFIX}{key}"
        env_value = os.getenv(env_key)
        if env_value is not None:
            try:
                result = self._convert_type(env_value, type)
                self._cache[key] = result
                return result
            except ValueError:
                logger.warning(f"環境變數 {env_key} 格式錯誤: {env_value}")

        if key in self._file_values:
            result = self._convert_type(self._file_values[key], type)
            self._cache[key] = result
            return result

        if key in DEFAULT_CONFIG:
            result = self._convert_type(DEFAULT_CONFIG[key], type)
            self._cache[key] = result
            return result

        self._cache[key] = default
        return default

    def _convert_type(self, value: Any, target_type) -> Any:
        """轉換值為指定類型"""
        if not isinstance(value, str):
            if target_type in (list, dict, bool):
                return value if target_type != bool else bool(value)
            return target_type(value)
        if target_type == bool:
            return value.lower() in ('true', '1', 'yes', 'on')
        elif target_type == int:
            return int(float(value))
        elif target_type == float:
            return float(value)
        elif target_type in (list, dict):
            return json.loads(value)
        else:
            return str(value)

    def get_mpe_config(self) -> Dict[str, Any]:
        """χ-MPE 變分掃描配置"""
        return {
            'restarts': self.get('MPE_RESTARTS', int, 10),
            'max_sweeps': self.get('MPE_MAX_SWEEPS', int, 500),
            'tol': self.get('MPE_TOL', float, 1e-10),
        }

    def get_ge_config(self) -> Dict[str, Any]:
        """幾何糾纏驗證配置"""
        return {
            'restarts': self.get('GE_RESTARTS', int, 50),
            'max_iters': self.get('GE_MAX_ITERS', int, 2000),
            'tol': self.get('GE_TOL', float, 1e-13),
        }

    def get_fit_config(self) -> Dict[str, Any]:
        """線路擬合配置"""
        return {
            'restarts': self.get('FIT_RESTARTS', int, 5),
            'max_sweeps': self.get('FIT_MAX_SWEEPS', int, 300),
            'tol': self.get('FIT_TOL', float, 1e-9),
        }

    def get_scan_config(self) -> Dict[str, Any]:
        """標度掃描配置"""
        return {
            'mu': self.get('SCAN_MU', float, 5.0),
            'sigma_grid': self.get('SCAN_SIGMA_GRID', str, 'log:0.25:16:16'),
            'seeds': self.get('SCAN_SEEDS', int, 3),
            'workers': self.get('SCAN_WORKERS', int, 1),
            'dense_cap': self.get_dense_cap(),
        }

    def get_dense_cap(self) -> int:
        """稠密表示的位元數上限"""
        return self.get('DENSE_CAP', int, DENSE_QUBIT_CAP)

    def get_table_config(self) -> Dict[str, Any]:
        """深度-χ 表格配置"""
        return {
            'max_depth': self.get('TABLE_MAX_DEPTH', int, 6),
            'max_chi': self.get('TABLE_MAX_CHI', int, 9),
            'r2_threshold': self.get('R2_THRESHOLD', float, 0.999),
        }

    def get_logging_config(self) -> Dict[str, Any]:
        """日誌配置"""
        return {
            'level': self.get('LOG_LEVEL', str, 'INFO'),
            'json_format': self.get('LOG_JSON', bool, False),
        }

    def clear_cache(self):
        """清除配置快取"""
        self._cache.clear()
        logger.debug("配置快取已清除")


# 全域配置管理器實例
config_manager = ConfigManager()
