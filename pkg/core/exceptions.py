# core/exceptions.py
"""
錯誤階層
每個例外都帶有命令列結束代碼
"""

from .constants import EXIT_INVALID_CONFIG, EXIT_NUMERICAL_FAILURE, EXIT_IO_FAILURE


class MpeError(Exception):
    """所有錯誤的基底類別"""
    exit_code = EXIT_NUMERICAL_FAILURE


class InvalidConfigError(MpeError, ValueError):
    """參數或前置條件不合法"""
    exit_code = EXIT_INVALID_CONFIG


class DimensionMismatchError(InvalidConfigError):
    """張量維度或位元數不一致"""


class NumericalError(MpeError, ArithmeticError):
    """數值失敗：非有限輸入、分解失敗、非么正閘等"""
    exit_code = EXIT_NUMERICAL_FAILURE


class OrthogonalOutcomeError(NumericalError):
    """重疊為零，距離為無窮大"""

    def __init__(self, message: str, overlap: float = 0.0):
        super().__init__(message)
        self.overlap = overlap


class DegenerateFitError(NumericalError):
    """回歸資料退化（所有 F 相同）"""


class ResultIOError(MpeError, OSError):
    """讀寫檔案失敗，訊息包含路徑"""
    exit_code = EXIT_IO_FAILURE

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = str(path)
