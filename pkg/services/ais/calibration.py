"""
Effective service time and port-wide duration statistics.
"""
from typing import Iterable, List, Optional

import numpy as np
from scipy import stats

from core import constants
from core.exceptions import CalibrationException
from core.logger import get_logger
from models.equilibrium import DistributionSummary
from models.voyage import GammaCalibration, Voyage
from services.statistics import summarize_distribution

logger = get_logger(__name__)


def calibrate_gamma_detailed(
    berth_starts: Iterable[float],
    min_interval: float = constants.DEFAULT_MIN_INTERVAL_HOURS,
    trim: float = constants.DEFAULT_TRIM,
    min_events: int = constants.DEFAULT_MIN_CALIBRATION_EVENTS,
) -> GammaCalibration:
    """
    Trimmed mean of the intervals between consecutive port-wide berth starts.

    Starts are deduplicated and sorted; intervals not above min_interval are
    dropped, then floor(trim * k) intervals are cut from each tail.

    Raises:
        CalibrationException: fewer than min_events distinct starts or no interval left
    """
    starts = np.unique(np.asarray(list(berth_starts), dtype=float))
    if starts.size < max(min_events, 2):
        raise CalibrationException(
            "Too few berth-start events to calibrate gamma",
            {"events": int(starts.size), "required": max(min_events, 2)},
        )

    intervals = np.diff(starts)
    kept = intervals[intervals > min_interval]
    if kept.size == 0:
        raise CalibrationException(
            "No berth-start interval above the minimum",
            {"events": int(starts.size), "min_interval": min_interval},
        )

    gamma = float(stats.trim_mean(kept, trim))
    result = GammaCalibration(
        gamma=gamma,
        events=int(starts.size),
        intervals=int(intervals.size),
        kept_intervals=int(kept.size),
        trimmed_per_tail=int(trim * kept.size),
    )
    logger.info(
        "[CALIBRATION] Effective service time calibrated",
        context={"gamma": round(gamma, 4), "events": result.events, "kept": result.kept_intervals},
    )
    return result


def calibrate_gamma(
    berth_starts: Iterable[float],
    min_interval: float = constants.DEFAULT_MIN_INTERVAL_HOURS,
    trim: float = constants.DEFAULT_TRIM,
    min_events: int = constants.DEFAULT_MIN_CALIBRATION_EVENTS,
) -> float:
    return calibrate_gamma_detailed(berth_starts, min_interval, trim, min_events).gamma


def waiting_stats(
    voyages: List[Voyage],
    bin_width: float = constants.DEFAULT_WAITING_BIN_HOURS,
    trim: float = constants.DEFAULT_TRIM,
) -> DistributionSummary:
    """Offshore waiting (berth start minus entry) across voyages."""
    return summarize_distribution([v.waiting_hours for v in voyages], bin_width, trim)


def service_stats(
    voyages: List[Voyage],
    bin_width: float = constants.DEFAULT_SERVICE_BIN_HOURS,
    trim: float = constants.DEFAULT_TRIM,
) -> DistributionSummary:
    """Berth-stay durations across voyages."""
    return summarize_distribution([v.service_hours for v in voyages], bin_width, trim)


def effective_berths(service_trimmed_mean: Optional[float], gamma: float) -> Optional[float]:
    """Berths the single-server approximation keeps busy: service time over gamma."""
    if service_trimmed_mean is None:
        return None
    return service_trimmed_mean / gamma


def congestion_ratio(mean_waiting: Optional[float], gamma: float) -> Optional[float]:
    """Mean waiting expressed in service slots."""
    if mean_waiting is None:
        return None
    return mean_waiting / gamma
