"""
Descriptive statistics for duration samples (waiting, service, slack).
"""
import math
from typing import Sequence

import numpy as np
from scipy import stats

from core import constants
from models.equilibrium import DistributionSummary, HistogramBin


def histogram_bins(values: Sequence[float], bin_width: float) -> list:
    """
    Fixed-width bins anchored at zero, from the lowest occupied bin to the highest.

    Bin k covers [k*bin_width, (k+1)*bin_width).
    """
    if len(values) == 0:
        return []
    arr = np.asarray(values, dtype=float)
    index = np.floor(arr / bin_width).astype(np.int64)
    lowest = int(index.min())
    counts = np.bincount(index - lowest)
    return [HistogramBin(left=(lowest + k) * bin_width, count=int(c)) for k, c in enumerate(counts)]


def summarize_distribution(
    values: Sequence[float],
    bin_width: float,
    trim: float = constants.DEFAULT_TRIM,
) -> DistributionSummary:
    """
    Count, mean, median, trimmed mean, total, zero share and histogram.

    The trimmed mean drops floor(trim * count) values from each tail.
    An empty sample gives count 0 and no histogram.
    """
    if len(values) == 0:
        return DistributionSummary(count=0, bin_width=bin_width)

    arr = np.asarray(values, dtype=float)
    count = int(arr.size)
    total = math.fsum(arr.tolist())
    return DistributionSummary(
        count=count,
        mean=total / count,
        median=float(np.median(arr)),
        trimmed_mean=float(stats.trim_mean(arr, trim)),
        total=total,
        share_zero=float(np.count_nonzero(arr == 0.0)) / count,
        bin_width=bin_width,
        histogram=histogram_bins(arr, bin_width),
    )
