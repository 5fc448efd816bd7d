from typing import Optional

import numpy as np

from core import constants
from core.exceptions import SimulationException


def batch_expected_service_times(
    arrivals: np.ndarray,
    gamma: float,
    t0: Optional[np.ndarray] = None,
    tolerance: float = constants.DEFAULT_EPS_TIE,
) -> np.ndarray:
    """
    Expected service time of every player for many profiles at once.

    Row-wise equivalent of expected_start_times: each row is one profile,
    tie blocks are snapped to their anchor and averaged over positions.

    Args:
        arrivals: Array of shape (rows, n)
        gamma: Service time; zero is allowed here
        t0: Per-row initial boundary; defaults to the row minimum
        tolerance: Tie tolerance

    Returns:
        Array of shape (rows, n) aligned with the input columns
    """
    arr = np.asarray(arrivals, dtype=float)
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise SimulationException("arrivals must be a non-empty 2-D array", {"shape": arr.shape})
    if gamma < 0:
        raise SimulationException("gamma must be nonnegative", {"gamma": gamma})

    rows, n = arr.shape
    if t0 is None:
        boundary = arr.min(axis=1)
    else:
        boundary = np.broadcast_to(np.asarray(t0, dtype=float), (rows,)).copy()

    order = np.argsort(arr, axis=1, kind="stable")
    ordered = np.take_along_axis(arr, order, axis=1)

    new_block = np.ones((rows, n), dtype=bool)
    new_block[:, 1:] = np.diff(ordered, axis=1) > tolerance

    index = np.broadcast_to(np.arange(n), (rows, n))
    block_first = np.maximum.accumulate(np.where(new_block, index, 0), axis=1)
    anchors = np.take_along_axis(ordered, block_first, axis=1)

    starts = np.empty_like(ordered)
    previous = boundary
    for k in range(n):
        starts[:, k] = np.maximum(anchors[:, k], previous)
        previous = starts[:, k] + gamma

    is_last = np.ones((rows, n), dtype=bool)
    is_last[:, :-1] = new_block[:, 1:]
    block_last = np.minimum.accumulate(np.where(is_last, index, n - 1)[:, ::-1], axis=1)[:, ::-1]

    cumulative = np.zeros((rows, n + 1))
    cumulative[:, 1:] = np.cumsum(starts, axis=1)
    size = block_last - block_first + 1
    block_sum = np.take_along_axis(cumulative, block_last + 1, axis=1) - np.take_along_axis(
        cumulative, block_first, axis=1
    )
    expected_sorted = np.where(size == 1, starts, block_sum / size)

    expected = np.empty_like(expected_sorted)
    np.put_along_axis(expected, order, expected_sorted, axis=1)
    return expected
