"""
PortCallDetector component for per-vessel port-call detection.
Extracted from AisPipelineService for Single Responsibility Principle.
"""
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from core.logger import get_logger
from models.voyage import CleaningReport, GeofenceParams, Voyage
from services.ais.detectors import (
    detect_berth_blocks,
    detect_departure,
    detect_frame_membership,
    detect_port_entries,
)
from services.ais.geo import haversine_km_vectorized

logger = get_logger(__name__)


class PortCallDetector:
    """
    Finds the voyages of one vessel from its annotated AIS series.

    A voyage needs a port entry, a berth visit owned by that entry and a
    departure from anchorage before the entry.
    """

    def __init__(self, params: Optional[GeofenceParams] = None):
        self.params = params or GeofenceParams()

    def process_vessel(
        self,
        vessel_id: str,
        series: pd.DataFrame,
        report: CleaningReport,
    ) -> Tuple[List[Voyage], List[float]]:
        """
        Voyages of one vessel and all of its berth starts.

        Each berth block belongs to the latest entry at or before its start;
        the earliest block of an entry is that entry's service visit.
        """
        if not detect_frame_membership(series, self.params):
            return [], []
        report.frame_callers += 1

        entries = detect_port_entries(series, self.params)
        blocks = detect_berth_blocks(series, self.params)
        report.entries += len(entries)

        visits = self._attribute_blocks(vessel_id, entries, blocks, report)

        voyages = []
        for k, t_entry in enumerate(entries):
            if k not in visits:
                report.entries_without_berth += 1
                continue
            tau = detect_departure(series, t_entry, self.params)
            if tau is None:
                report.incomplete_voyages += 1
                logger.debug("[AIS] Incomplete voyage", context={"vessel": vessel_id, "t_entry": t_entry})
                continue
            start, end = visits[k]
            voyages.append(
                Voyage(
                    vessel_id=vessel_id,
                    tau=tau,
                    t_entry=t_entry,
                    berth_start=start,
                    berth_end=end,
                    service_hours=end - start,
                    waiting_hours=start - t_entry,
                    sailing_hours=t_entry - tau,
                    sailing_km=self.sailing_km(series, tau, t_entry),
                )
            )
        return voyages, [start for start, _ in blocks]

    @staticmethod
    def _attribute_blocks(
        vessel_id: str,
        entries: List[float],
        blocks: List[Tuple[float, float]],
        report: CleaningReport,
    ) -> dict:
        visits = {}
        for start, end in blocks:
            owner = None
            for k, t_entry in enumerate(entries):
                if t_entry <= start:
                    owner = k
            if owner is None:
                report.unattributed_berth_blocks += 1
                continue
            if owner + 1 < len(entries) and entries[owner + 1] < end:
                report.ambiguous_berth_blocks += 1
                logger.debug(
                    "[AIS] Berth block spans the next entry",
                    context={"vessel": vessel_id, "start": start, "end": end},
                )
            if owner not in visits:
                visits[owner] = (start, end)
        return visits

    @staticmethod
    def sailing_km(series: pd.DataFrame, tau: float, t_entry: float) -> float:
        """Great-circle track length between departure and entry."""
        leg = series[(series["hours"] >= tau) & (series["hours"] <= t_entry)]
        if len(leg) < 2:
            return 0.0
        lats = leg["lat"].to_numpy()
        lons = leg["lon"].to_numpy()
        return float(np.sum(haversine_km_vectorized(lats[:-1], lons[:-1], lats[1:], lons[1:])))
