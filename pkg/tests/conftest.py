# tests/conftest.py
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from mps.state import DenseState  # noqa: E402
from states.reference import ghz_state, w_state  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="執行標記為 slow 的驗收實驗")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_dense(n: int, rng) -> DenseState:
    """標準複高斯隨機態"""
    vec = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return DenseState.from_vector(vec)


@pytest.fixture
def random_state(rng):
    return lambda n: random_dense(n, rng)


@pytest.fixture
def ghz4():
    return ghz_state(4)


@pytest.fixture
def w3():
    return w_state(3)


@pytest.fixture(autouse=True)
def _isolated_config(monkeypatch):
    """每個測試使用乾淨的配置快取與環境"""
    from core.config_manager import config_manager
    for key in list(os.environ):
        if key.startswith("MPE_"):
            monkeypatch.delenv(key, raising=False)
    config_manager.clear_cache()
    config_manager._file_values = {}
    yield
    config_manager.clear_cache()
    config_manager._file_values = {}
