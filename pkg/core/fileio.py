# core/fileio.py
"""JSON 讀寫，錯誤帶路徑"""

import json
import logging
from pathlib import Path
from typing import Any, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .exceptions import InvalidConfigError, ResultIOError

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def read_model(path, model_cls: Type[M]) -> M:
    """讀取 JSON 檔並以 pydantic 模型驗證"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
    except OSError as e:
        raise ResultIOError(path, e) from e
    except json.JSONDecodeError as e:
        raise InvalidConfigError(f"{path}: JSON 格式錯誤: {e}") from e
    try:
        return model_cls.model_validate(raw)
    except ValidationError as e:
        raise InvalidConfigError(f"{path}: 不符合 {model_cls.__name__} 格式: {e}") from e


def write_json(path, payload: Any):
    """寫入 JSON（自動建立目錄）"""
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
    except (OSError, TypeError) as e:
        raise ResultIOError(path, e) from e
    logger.info(f"已寫入: {path}")
