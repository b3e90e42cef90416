# core/constants.py
# 統一的常數管理檔案

import math

LIBRARY_VERSION = "0.1.0"

# 物理維度（量子位元）
PHYSICAL_DIM = 2

# 數值容差
NORM_TOL = 1e-12              # 態向量歸一化容差
HERMITIAN_TOL = 1e-10         # eigh 的厄米性容差
UNITARY_TOL = 1e-10           # 兩位元閘的么正性容差
ISOMETRY_TOL = 1e-10          # 右正則等距條件容差
CORRUPTED_ISOMETRY_TOL = 1e-8 # 合成電路時視為輸入損壞的門檻
KERNEL_EIG_TOL = 1e-10        # M 矩陣零特徵值門檻
ORTHOGONAL_OVERLAP = 1e-15    # |<psi|phi>| 低於此值視為正交

# 稠密表示的記憶體上限
DENSE_QUBIT_CAP = 24
ORACLE_QUBIT_CAP = 8          # 幾何糾纏暴力驗證的規模上限
UNITARY_QUBIT_CAP = 10        # 完整 2^N 電路矩陣上限

# 對數底數（所有 E / F / S 皆以 bits 表示）
LOG_BASE = 2

# 線性判定門檻
R2_LINEAR_THRESHOLD = 0.999

# 標度分類
SCALING_SUPER_LINEAR = "super-linear"
SCALING_LINEAR = "linear"
SCALING_SUB_LINEAR = "sub-linear"

SCALING_CHOICES = [
    (SCALING_SUPER_LINEAR, "超線性（深度過剩）"),
    (SCALING_LINEAR, "線性（深度最佳）"),
    (SCALING_SUB_LINEAR, "次線性（深度不足）"),
]

# 結果類型
OUTCOME_OK = "ok"
OUTCOME_ORTHOGONAL = "orthogonal"

# 廣義隨機純態
DEFAULT_MU = 5.0
DEFAULT_SIGMA_GRID = "log:0.25:16:16"
DEFAULT_SEEDS_PER_SIGMA = 3

# 線路層佈局：每層皆為由左至右的階梯
LAYER_LAYOUT = "repeated-ascending-stair"
RPS_AMPLITUDE_CONVENTION = "complex: Re, Im i.i.d. N(mu, sigma), then normalized"

# CSV 欄位
SCALING_CSV_HEADER = [
    "depth", "chi", "sigma", "mu", "seed",
    "F_bits", "E_bits", "f_converged", "e_converged",
]

# 各深度下線性關係成立的參考 χ 集合（D=4 以上僅作警示）
REFERENCE_LINEAR_CHIS = {
    1: {2},
    2: {3},
    3: {4, 5},
    4: {4, 5},
    5: {6, 7},
    6: {7, 8, 9},
}
GATED_REFERENCE_DEPTHS = (1, 2, 3)

# 程式結束代碼
EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_IO_FAILURE = 4


def page_value_bits(n_qubits: int) -> float:
    """半鏈 Page 熵 N/2 - 1/(2 ln 2)（bits）"""
    return n_qubits / 2 - 1 / (2 * math.log(2))


# 預設配置值（環境變數 MPE_<KEY> 與設定檔可覆寫）
DEFAULT_CONFIG = {
    # χ-MPE 變分掃描
    "MPE_RESTARTS": 10,
    "MPE_MAX_SWEEPS": 500,
    "MPE_TOL": 1e-10,

    # 幾何糾纏驗證
    "GE_RESTARTS": 50,
    "GE_MAX_ITERS": 2000,
    "GE_TOL": 1e-13,

    # 線路擬合
    "FIT_RESTARTS": 5,
    "FIT_MAX_SWEEPS": 300,
    "FIT_TOL": 1e-9,

    # 掃描
    "SCAN_MU": DEFAULT_MU,
    "SCAN_SIGMA_GRID": DEFAULT_SIGMA_GRID,
    "SCAN_SEEDS": DEFAULT_SEEDS_PER_SIGMA,
    "SCAN_WORKERS": 1,
    "DENSE_CAP": DENSE_QUBIT_CAP,

    # 表格
    "TABLE_MAX_DEPTH": 6,
    "TABLE_MAX_CHI": 9,
    "R2_THRESHOLD": R2_LINEAR_THRESHOLD,

    # 日誌
    "LOG_LEVEL": "INFO",
    "LOG_JSON": False,
}
