"""
Unit tests for gamma calibration and port-wide duration statistics.
"""

import numpy as np
import pytest

from core.exceptions import CalibrationException
from services.ais.calibration import (
    calibrate_gamma,
    calibrate_gamma_detailed,
    congestion_ratio,
    effective_berths,
    service_stats,
    waiting_stats,
)
from services.statistics import histogram_bins, summarize_distribution


class TestCalibrateGamma:
    """Test suite for service-time calibration"""

    def test_regular_starts(self):
        assert calibrate_gamma([0.0, 4.0, 8.0, 12.0], min_events=2) == pytest.approx(4.0)

    def test_short_intervals_excluded(self):
        starts = [0.0] + [0.05 + 4.0 * k for k in range(21)]
        result = calibrate_gamma_detailed(starts)
        assert result.gamma == pytest.approx(4.0, abs=1e-9)
        assert result.intervals == 21
        assert result.kept_intervals == 20

    def test_outliers_trimmed(self):
        starts = np.cumsum([0.0] + [4.0] * 8 + [100.0, 0.5]).tolist()
        result = calibrate_gamma_detailed(starts, trim=0.1)
        assert result.trimmed_per_tail == 1
        assert result.gamma == pytest.approx(4.0)

    def test_order_and_duplicates_ignored(self):
        starts = [12.0, 0.0, 8.0, 4.0, 4.0]
        assert calibrate_gamma(starts, min_events=2) == pytest.approx(4.0)

    def test_too_few_events(self):
        with pytest.raises(CalibrationException) as exc_info:
            calibrate_gamma([0.0, 4.0, 8.0])
        assert exc_info.value.details["required"] == 10

    def test_single_event_never_enough(self):
        with pytest.raises(CalibrationException):
            calibrate_gamma([3.0], min_events=1)

    def test_no_interval_above_minimum(self):
        with pytest.raises(CalibrationException):
            calibrate_gamma([0.0, 0.05, 0.1], min_events=2)


class TestDurationStats:
    """Test suite for waiting and service summaries"""

    def test_waiting(self, make_voyage):
        voyages = [make_voyage(v, 10.0 * k, waiting=w) for k, (v, w) in enumerate([("A", 10), ("B", 20), ("C", 30)])]
        summary = waiting_stats(voyages)
        assert summary.count == 3
        assert summary.mean == pytest.approx(20.0)
        assert summary.median == pytest.approx(20.0)
        assert [(b.left, b.count) for b in summary.histogram] == [(0.0, 1), (12.0, 1), (24.0, 1)]

    def test_empty(self):
        summary = waiting_stats([])
        assert summary.count == 0
        assert summary.mean is None
        assert summary.histogram == []

    def test_service(self, make_voyage):
        voyages = [make_voyage("A", 0.0, service=36.0), make_voyage("B", 5.0, service=30.0)]
        summary = service_stats(voyages)
        assert summary.median == pytest.approx(33.0)
        assert summary.total == pytest.approx(66.0)

    def test_ratios(self):
        assert effective_berths(36.0, 4.0) == pytest.approx(9.0)
        assert congestion_ratio(100.0, 4.0) == pytest.approx(25.0)
        assert effective_berths(None, 4.0) is None
        assert congestion_ratio(None, 4.0) is None


class TestHistogram:
    """Test suite for histogram bins"""

    def test_bins_from_lowest_to_highest(self):
        bins = histogram_bins([0.2, 1.7, 1.9], 0.5)
        assert [(b.left, b.count) for b in bins] == [(0.0, 1), (0.5, 0), (1.0, 0), (1.5, 2)]

    def test_share_zero(self):
        summary = summarize_distribution([0.0, 0.0, 2.0, 6.0], 1.0)
        assert summary.share_zero == pytest.approx(0.5)
        assert summary.total == pytest.approx(8.0)
