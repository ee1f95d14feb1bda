import time

import pytest

from src.batch_processor import BatchProcessor


def _slow_square(x):
    time.sleep(0.01 * (5 - x))
    return x * x


@pytest.mark.parametrize("workers", [1, 4])
def test_results_keep_input_order(workers):
    processor = BatchProcessor(max_workers=workers, label="test")
    assert processor.map_ordered(_slow_square, [0, 1, 2, 3, 4]) == [0, 1, 4, 9, 16]
    stats = processor.get_stats()
    assert stats["total"] == stats["success"] == 5
    assert stats["failed"] == 0


@pytest.mark.parametrize("workers", [1, 3])
def test_first_failure_in_input_order_is_raised(workers):
    def fn(x):
        if x in (2, 4):
            raise ValueError(f"bad {x}")
        return x

    processor = BatchProcessor(max_workers=workers)
    with pytest.raises(ValueError, match="bad 2"):
        processor.map_ordered(fn, [0, 1, 2, 3, 4])
    assert processor.get_stats()["failed"] == 2


def test_invalid_worker_count():
    with pytest.raises(ValueError):
        BatchProcessor(max_workers=0)
