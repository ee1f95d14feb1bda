"""
설정 로딩 모듈
환경변수 및 상수 관리
"""
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv


# 환경변수 로드
load_dotenv()


DATA_DIR = Path(__file__).parent / "data"

# 기본 fixture 경로
EXT_LABELS_FILE = DATA_DIR / "ext_labels.yaml"
EXT_CHART_FIXTURE = DATA_DIR / "ext_chart_fixture.yaml"
MAY_E4_FIXTURE = DATA_DIR / "may_e4_fixture.yaml"
MAY_LEDGER_FILE = DATA_DIR / "may_ledger.yaml"
ADAMS_LEDGER_FILE = DATA_DIR / "adams_ledger.yaml"

# 분해 중 체크포인트 최소 간격 (초), 마지막 셀 뒤에는 항상 저장
DEFAULT_CHECKPOINT_INTERVAL = 30.0


@dataclass
class Config:
    """애플리케이션 설정"""
    THREADS: int = 1
    OUT_ROOT: str = "out"
    LOG_LEVEL: str = "INFO"
    ORACLE_MAX_DEGREE: int = 16
    CHECKPOINT_INTERVAL: float = DEFAULT_CHECKPOINT_INTERVAL

    def __post_init__(self):
        if self.THREADS < 1:
            raise ValueError(f"MEXT_THREADS 는 1 이상이어야 합니다: {self.THREADS}")
        if self.ORACLE_MAX_DEGREE < 0:
            raise ValueError(f"MEXT_ORACLE_MAX_DEGREE 는 음수일 수 없습니다: {self.ORACLE_MAX_DEGREE}")
        if self.CHECKPOINT_INTERVAL < 0:
            raise ValueError(f"MEXT_CHECKPOINT_INTERVAL 은 음수일 수 없습니다: {self.CHECKPOINT_INTERVAL}")
        if not isinstance(logging.getLevelName(self.LOG_LEVEL.upper()), int):
            raise ValueError(f"알 수 없는 로그 레벨: {self.LOG_LEVEL}")

    @property
    def log_level(self) -> int:
        return logging.getLevelName(self.LOG_LEVEL.upper())


def get_config() -> Config:
    """설정 인스턴스 반환"""
    try:
        return Config(
            THREADS=int(os.getenv("MEXT_THREADS", "1")),
            OUT_ROOT=os.getenv("MEXT_OUT_ROOT", "out"),
            LOG_LEVEL=os.getenv("MEXT_LOG_LEVEL", "INFO"),
            ORACLE_MAX_DEGREE=int(os.getenv("MEXT_ORACLE_MAX_DEGREE", "16")),
            CHECKPOINT_INTERVAL=float(os.getenv("MEXT_CHECKPOINT_INTERVAL", str(DEFAULT_CHECKPOINT_INTERVAL))),
        )
    except ValueError as e:
        raise ValueError(f"환경변수 형식 오류: {e}") from e
