"""
AisPipelineService - orchestrates AIS ingestion, event detection and calibration.
Refactored to use component-based architecture with dependency injection.
"""
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from core.config import RunConfig
from core.exceptions import EmptyResultException
from core.logger import get_logger
from core.performance import PerformanceMonitor, get_performance_monitor
from models.voyage import GeofenceParams, PipelineResult, Voyage

# Component imports
from services.components import AisCleaner, GammaCalibrator, PortCallDetector

logger = get_logger(__name__)


class AisPipelineService:
    """
    Turns raw AIS records into voyages and a calibrated service time.

    Stages: clean -> (ship-type filter) -> per-vessel detection -> calibration.
    Vessels are processed independently; output is ordered by (vessel_id, t_entry).

    Uses a component-based architecture:
    - AisCleaner: Reading, cleaning and per-vessel splitting
    - PortCallDetector: Entries, berth visits and departures of one vessel
    - GammaCalibrator: Effective service time from berth starts
    """

    def __init__(
        self,
        config: Optional[RunConfig] = None,
        params: Optional[GeofenceParams] = None,
        monitor: Optional[PerformanceMonitor] = None,
        # Component dependencies (optional)
        cleaner: Optional[AisCleaner] = None,
        detector: Optional[PortCallDetector] = None,
        calibrator: Optional[GammaCalibrator] = None,
    ):
        self.config = config or RunConfig()
        self.params = params or GeofenceParams.from_config(self.config)
        self.monitor = monitor or get_performance_monitor()

        self.cleaner = cleaner or AisCleaner(self.config.allowed_ship_types)
        self.detector = detector or PortCallDetector(self.params)
        self.calibrator = calibrator or GammaCalibrator(
            min_interval=self.params.min_interval_hours,
            trim=self.params.trim,
            min_events=self.config.min_calibration_events,
        )

    def run(self, input_path: Union[str, Path], metadata_path: Optional[Union[str, Path]] = None) -> PipelineResult:
        """
        Raises:
            InputFileException: unreadable input
            EmptyResultException: no usable records or no complete voyage
            CalibrationException: too few berth starts (when no gamma override is set)
        """
        raw, metadata = self.cleaner.read(input_path, metadata_path)
        return self.run_frame(raw, metadata)

    def run_frame(self, raw: pd.DataFrame, metadata: Optional[pd.DataFrame] = None) -> PipelineResult:
        with self.monitor.measure("clean", {"rows": len(raw)}):
            frame, report = self.cleaner.clean(raw, metadata)

        if frame.empty:
            raise EmptyResultException("No valid AIS records", {"rows_read": report.rows_read})

        series_by_vessel, epoch = self.cleaner.split(frame, self.params)

        voyages: List[Voyage] = []
        berth_starts: List[float] = []
        with self.monitor.measure("detect", {"vessels": report.vessels}):
            for vessel_id, series in series_by_vessel.items():
                vessel_voyages, vessel_starts = self.detector.process_vessel(vessel_id, series, report)
                voyages.extend(vessel_voyages)
                berth_starts.extend(vessel_starts)

        voyages.sort(key=lambda v: (v.vessel_id, v.t_entry))
        logger.info(
            "[AIS] Detection finished",
            context={
                "callers": report.frame_callers,
                "entries": report.entries,
                "voyages": len(voyages),
                "incomplete": report.incomplete_voyages,
                "berth_blocks": len(berth_starts),
            },
        )
        if not voyages:
            raise EmptyResultException("No complete voyages detected", {"entries": report.entries})

        calibration = None
        if self.config.gamma is not None:
            gamma = self.config.gamma
            logger.info("[CALIBRATION] Using gamma override", context={"gamma": gamma})
        else:
            with self.monitor.measure("calibrate", {"events": len(berth_starts)}):
                calibration = self.calibrator.calibrate(berth_starts)
            gamma = calibration.gamma

        return PipelineResult(
            voyages=voyages,
            berth_starts=sorted(berth_starts),
            gamma=gamma,
            calibration=calibration,
            report=report,
            epoch=epoch,
        )
