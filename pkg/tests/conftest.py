"""
공용 pytest fixture
- 분해/차트 계산은 세션 단위로 한 번만
- 느린 테스트는 --runslow 로만 실행
"""
import logging

import pytest

from src.ext import ExtComputer, required_frontier
from src.fixtures import read_labels
from src.resolution import make_resolution

SMALL_RANGE = (6, 10)  # (max_s, max_stem)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="느린 테스트 실행")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 회귀 범위 전체를 계산하는 느린 테스트")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="--runslow 필요")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """MEXT_* 환경변수를 비우고 출력 루트를 임시 폴더로"""
    for key in ("MEXT_THREADS", "MEXT_LOG_LEVEL", "MEXT_ORACLE_MAX_DEGREE", "MEXT_CHECKPOINT_INTERVAL"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("MEXT_OUT_ROOT", str(tmp_path / "out"))
    root = logging.getLogger()
    before = list(root.handlers)
    yield
    # CLI 가 붙인 핸들러 정리
    for handler in root.handlers[:]:
        if handler not in before:
            root.removeHandler(handler)
            handler.close()


@pytest.fixture(scope="session")
def motivic_resolution():
    return make_resolution(*required_frontier(*SMALL_RANGE), motivic=True)


@pytest.fixture(scope="session")
def classical_resolution():
    return make_resolution(*required_frontier(*SMALL_RANGE), motivic=False)


@pytest.fixture(scope="session")
def motivic_chart(motivic_resolution):
    return ExtComputer(motivic_resolution, *SMALL_RANGE).chart(labels=read_labels())


@pytest.fixture(scope="session")
def classical_chart(classical_resolution):
    return ExtComputer(classical_resolution, *SMALL_RANGE).chart()
