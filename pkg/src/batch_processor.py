#!/usr/bin/env python3
"""
배치 처리 시스템
- ThreadPoolExecutor 로 셀 단위 작업을 병렬 실행
- 완료 순서와 무관하게 입력 순서대로 결과 병합 (결정적 출력)
- 실패 시 예외를 수집해 마지막에 다시 발생
"""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime
from typing import Any, Callable, Dict, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class BatchProcessor:
    """배치 처리 관리자"""

    def __init__(self, max_workers: int = 1, label: str = "batch"):
        """
        Args:
            max_workers: 동시 처리할 최대 작업 수 (1 이면 순차 실행)
            label: 로그에 표시할 배치 이름
        """
        if max_workers < 1:
            raise ValueError(f"max_workers 는 1 이상이어야 합니다: {max_workers}")
        self.max_workers = max_workers
        self.label = label
        self.stats = {
            "total": 0,
            "processed": 0,
            "success": 0,
            "failed": 0,
            "start_time": None,
            "end_time": None,
        }

    def map_ordered(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        items 각각에 fn 적용, 결과는 입력 순서 그대로

        Raises:
            첫 번째로 실패한 작업(입력 순서 기준)의 예외
        """
        self.stats.update(total=len(items), processed=0, success=0, failed=0, start_time=datetime.now())
        results: List[Any] = [None] * len(items)
        errors: Dict[int, BaseException] = {}

        if self.max_workers == 1 or len(items) <= 1:
            for i, item in enumerate(items):
                try:
                    results[i] = fn(item)
                except Exception as e:
                    errors[i] = e
                self._count(i, item, errors)
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_index = {executor.submit(fn, item): i for i, item in enumerate(items)}
                for future in as_completed(future_to_index):
                    i = future_to_index[future]
                    try:
                        results[i] = future.result()
                    except Exception as e:
                        errors[i] = e
                    self._count(i, items[i], errors)

        self.stats["end_time"] = datetime.now()
        duration = self.stats["end_time"] - self.stats["start_time"]
        logger.debug(
            f"{self.label}: {self.stats['success']}/{self.stats['total']} 완료, "
            f"{self.max_workers} workers, {duration}"
        )
        if errors:
            raise errors[min(errors)]
        return results

    def _count(self, i: int, item, errors: Dict[int, BaseException]) -> None:
        self.stats["processed"] += 1
        if i in errors:
            self.stats["failed"] += 1
            logger.error(f"❌ {self.label}[{item}] 실패: {errors[i]}")
        else:
            self.stats["success"] += 1

    def get_stats(self) -> Dict:
        """처리 통계 반환"""
        return self.stats.copy()
