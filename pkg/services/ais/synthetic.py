"""
Deterministic synthetic AIS corpus.

Hourly tracks placed due north of the port centre so distances are exact:
three complete port calls, nine vessels already inside the port when the
data starts (they only contribute berth starts), one vessel that loiters
just inside the port radius without berthing, one passer-by, and a few
dirty rows for the cleaning stage.
"""
import math
from datetime import datetime, timedelta
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import pytz

from core import constants
from models.voyage import AisRecord, GeofenceParams

SYNTHETIC_EPOCH = datetime(2024, 1, 1, tzinfo=pytz.UTC)
KM_PER_DEGREE = constants.EARTH_RADIUS_KM * math.pi / 180.0

AIS_FILE = "synthetic_ais.csv"
METADATA_FILE = "vessels.csv"

# vessel -> (entry hour, berth start hour)
COMPLETE_CALLS: Dict[str, Tuple[int, int]] = {"V1": (50, 100), "V2": (70, 116), "V3": (100, 132)}
FILLER_BERTH_STARTS = (104, 108, 112, 120, 124, 128, 136, 140, 144)
BERTH_HOURS = 36


class _TrackWriter:
    def __init__(self, params: GeofenceParams):
        self.params = params
        self.rows: List[Dict[str, str]] = []

    def point(self, vessel_id: str, hour: float, dist_km: float, sog: float) -> None:
        record = AisRecord(
            vessel_id=vessel_id,
            timestamp=SYNTHETIC_EPOCH + timedelta(hours=hour),
            lat=self.params.center_lat + dist_km / KM_PER_DEGREE,
            lon=self.params.center_lon,
            sog=float(sog),
        )
        self.rows.append(record.to_row())

    def berth_and_leave(self, vessel_id: str, berth_start: int) -> None:
        for h in range(berth_start, berth_start + BERTH_HOURS + 1):
            self.point(vessel_id, h, 1.0, 0.1)
        leave = berth_start + BERTH_HOURS + 1
        self.point(vessel_id, leave, 20.0, 10.0)
        self.point(vessel_id, leave + 1, 70.0, 12.0)
        self.point(vessel_id, leave + 2, 100.0, 12.0)

    def complete_call(self, vessel_id: str, entry: int, berth_start: int) -> None:
        # stop at the previous port, slow pull-out, then 20 h steaming in
        for h in range(entry - 30, entry - 21):
            self.point(vessel_id, h, 600.0, 0.3)
        self.point(vessel_id, entry - 21, 590.0, 6.0)
        for h in range(entry - 20, entry + 1):
            self.point(vessel_id, h, 55.0 + (entry - h) * 25.0, 13.5)
        for h in range(entry + 1, berth_start):
            self.point(vessel_id, h, 30.0, 0.2)
        self.berth_and_leave(vessel_id, berth_start)


def generate_synthetic_corpus(
    seed: int = constants.DEFAULT_SEED,
    params: Optional[GeofenceParams] = None,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Build the corpus as raw text columns, rows shuffled deterministically.

    Returns:
        (AIS records, vessel metadata)
    """
    params = params or GeofenceParams()
    writer = _TrackWriter(params)

    for vessel_id, (entry, berth_start) in COMPLETE_CALLS.items():
        writer.complete_call(vessel_id, entry, berth_start)

    for k, berth_start in enumerate(FILLER_BERTH_STARTS, start=1):
        vessel_id = f"F{k}"
        for h in range(0, berth_start):
            writer.point(vessel_id, h, 30.0, 0.2)
        writer.berth_and_leave(vessel_id, berth_start)

    for h in range(60, 70):
        writer.point("L1", h, 305.0 - (h - 60) * 25.0, 13.5)
    for h in range(70, 79):
        writer.point("L1", h, 55.0, 0.5)
    writer.point("L1", 79, 80.0, 12.0)
    writer.point("L1", 80, 120.0, 12.0)

    for h in range(0, 11):
        writer.point("P1", h, 120.0, 12.0)
    writer.point("P1", 11, 120.0, 55.0)

    rows = writer.rows
    bad_lat = dict(rows[-1], timestamp=(SYNTHETIC_EPOCH + timedelta(hours=12)).strftime("%Y-%m-%dT%H:%M:%SZ"))
    bad_lat["lat"] = "abc"
    duplicate = next(r for r in rows if r["vessel_id"] == "V1" and r["timestamp"].startswith("2024-01-03T02"))
    rows = rows + [bad_lat, dict(duplicate)]

    ais = pd.DataFrame(rows, columns=list(constants.AIS_COLUMNS))
    order = np.random.default_rng(seed).permutation(len(ais))
    ais = ais.iloc[order].reset_index(drop=True)

    vessel_ids = list(COMPLETE_CALLS) + [f"F{k}" for k in range(1, len(FILLER_BERTH_STARTS) + 1)] + ["L1"]
    records = [{"vessel_id": v, "ship_type": "Bulk Carrier"} for v in vessel_ids]
    records.append({"vessel_id": "P1", "ship_type": "Tanker"})
    metadata = pd.DataFrame(
        records,
        columns=list(constants.METADATA_COLUMNS),
    )
    return ais, metadata
