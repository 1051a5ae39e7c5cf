import numpy as np

from src.app.utils.helpers import (
    STREAM_CASCADE,
    STREAM_EVAL,
    gather_ranges,
    log_ratio_bound,
    requirement,
    run_blocks,
    substream,
)


def test_substreams_are_reproducible_and_distinct():
    a = substream(7, STREAM_CASCADE, 0).random(4)
    b = substream(7, STREAM_CASCADE, 0).random(4)
    c = substream(7, STREAM_EVAL, 0).random(4)
    d = substream(7, STREAM_CASCADE, 1).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_requirement_rounding():
    assert requirement(0.5, 5) == 3
    assert requirement(1.0, 7) == 7
    # 0.7 * 100 is 70.00000000000001 in floating point
    assert requirement(0.7, 100) == 70
    assert requirement(7 / 8, 8) == 7


def test_run_blocks():
    assert run_blocks(2500, 1000) == [(0, 1000), (1, 1000), (2, 500)]
    assert run_blocks(0, 1000) == []


def test_gather_ranges():
    ptr = np.array([0, 2, 2, 5, 6])
    assert gather_ranges(ptr, [2, 0]).tolist() == [2, 3, 4, 0, 1]
    assert gather_ranges(ptr, [1]).tolist() == []


def test_log_ratio_bound():
    assert abs(log_ratio_bound(np.e * 0.1, 0.1) - 2.0) < 1e-12
