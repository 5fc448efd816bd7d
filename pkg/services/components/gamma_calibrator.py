"""
GammaCalibrator component for effective service time calibration.
Extracted from AisPipelineService for Single Responsibility Principle.
"""
from typing import Iterable

from core import constants
from models.voyage import GammaCalibration
from services.ais.calibration import calibrate_gamma_detailed


class GammaCalibrator:
    """Calibrates gamma from port-wide berth starts with fixed thresholds."""

    def __init__(
        self,
        min_interval: float = constants.DEFAULT_MIN_INTERVAL_HOURS,
        trim: float = constants.DEFAULT_TRIM,
        min_events: int = constants.DEFAULT_MIN_CALIBRATION_EVENTS,
    ):
        self.min_interval = min_interval
        self.trim = trim
        self.min_events = min_events

    def calibrate(self, berth_starts: Iterable[float]) -> GammaCalibration:
        """
        Raises:
            CalibrationException: too few berth starts or no interval above the minimum
        """
        return calibrate_gamma_detailed(
            berth_starts,
            min_interval=self.min_interval,
            trim=self.trim,
            min_events=self.min_events,
        )
