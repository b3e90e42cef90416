# core/log_config.py
"""
日誌設定
純文字格式與 JSON 格式（python-json-logger）
"""

import logging
from pathlib import Path
from typing import Optional

from pythonjsonlogger import jsonlogger

PLAIN_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
JSON_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


def configure_logging(level: str = "INFO", json_format: bool = False,
                      log_file: Optional[str] = None) -> logging.Logger:
    """
    設定根日誌器，只由命令列入口呼叫一次

    Args:
        level: 日誌等級名稱
        json_format: 是否輸出 JSON 行
        log_file: 額外寫入的日誌檔案

    Returns:
        根日誌器
    """
    if json_format:
        formatter = jsonlogger.JsonFormatter(JSON_FORMAT)
    else:
        formatter = logging.Formatter(PLAIN_FORMAT)

    handlers = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    return root
