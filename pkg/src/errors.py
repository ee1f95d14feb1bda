"""
예외 정의 모듈
- MotivicError: 모든 계산 오류의 기반 클래스
- 입력 오류(ValueError 계열)와 내부 정합성 오류(IntegrityError)를 구분
"""
from dataclasses import dataclass
from typing import Any, List, Optional


class MotivicError(Exception):
    """계산 엔진 공통 예외"""


class HomogeneityError(MotivicError, ValueError):
    """비동차 합, 행렬, ledger 값"""


class IntegrityError(MotivicError):
    """내부 정합성 실패 (u(X) < 0, d∘d ≠ 0, 최소성 위반, 체크포인트 손상 등)"""


class OracleBoundError(MotivicError, ValueError):
    """오라클 차수 상한 초과"""


class InsufficientFrontierError(MotivicError):
    """계산 완료 범위(frontier) 밖의 요청"""


class TruncationError(MotivicError):
    """May DGA 절단 범위 밖의 요청"""


@dataclass
class LedgerRejection:
    """거부된 ledger 항목 하나"""
    entry: Any
    reason: str

    def __str__(self) -> str:
        return f"{self.entry}: {self.reason}"


class LedgerError(MotivicError):
    """ledger 검증 실패 - 거부 목록을 함께 보관"""

    def __init__(self, message: str, rejections: Optional[List[LedgerRejection]] = None):
        self.rejections = list(rejections or [])
        if self.rejections:
            details = "\n".join(f"  - {r}" for r in self.rejections)
            message = f"{message}\n{details}"
        super().__init__(message)


class ChartFormatError(MotivicError, ValueError):
    """차트 파일 파싱 실패 - 위치 정보 포함"""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
