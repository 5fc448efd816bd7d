from datetime import datetime
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core import constants


class AisRecord(BaseModel):
    """One position report as it appears in the AIS file; sog is not range-checked here."""

    vessel_id: str = Field(..., min_length=1)
    timestamp: datetime
    lat: float = Field(..., ge=-90.0, le=90.0)
    lon: float = Field(..., ge=-180.0, le=180.0)
    sog: float = Field(..., description="Speed over ground (knots)")

    def to_row(self) -> Dict[str, str]:
        """CSV text columns in AIS file order."""
        return {
            "vessel_id": self.vessel_id,
            "timestamp": self.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "lat": repr(self.lat),
            "lon": repr(self.lon),
            "sog": repr(self.sog),
        }


class GeofenceParams(BaseModel):
    """Detection thresholds for port calls; defaults are the Port Hedland values."""

    model_config = ConfigDict(frozen=True)

    center_lat: float = constants.PORT_CENTER_LAT
    center_lon: float = constants.PORT_CENTER_LON
    r_frame_deg: float = constants.DEFAULT_R_FRAME_DEG
    r_port_km: float = constants.DEFAULT_R_PORT_KM
    r_berth_km: float = constants.DEFAULT_R_BERTH_KM
    v_stop_kn: float = constants.DEFAULT_V_STOP_KN
    v_go_kn: float = constants.DEFAULT_V_GO_KN
    min_stop_hours: float = constants.DEFAULT_MIN_STOP_HOURS
    berth_min_hours: float = constants.DEFAULT_BERTH_MIN_HOURS
    berth_max_hours: float = constants.DEFAULT_BERTH_MAX_HOURS
    min_interval_hours: float = constants.DEFAULT_MIN_INTERVAL_HOURS
    trim: float = constants.DEFAULT_TRIM
    gap_break_hours: float = constants.DEFAULT_GAP_BREAK_HOURS

    @model_validator(mode="after")
    def check_ordering(self):
        if not self.r_berth_km < self.r_port_km:
            raise ValueError("r_berth_km must be smaller than r_port_km")
        if not self.v_stop_kn < self.v_go_kn:
            raise ValueError("v_stop_kn must be smaller than v_go_kn")
        if not self.berth_min_hours < self.berth_max_hours:
            raise ValueError("berth_min_hours must be smaller than berth_max_hours")
        return self

    @classmethod
    def from_config(cls, config) -> "GeofenceParams":
        """Pick the geofence fields out of a RunConfig."""
        return cls(**{name: getattr(config, name) for name in cls.model_fields})


class Voyage(BaseModel):
    """One port call; instants are hours from the dataset epoch."""

    model_config = ConfigDict(frozen=True)

    vessel_id: str
    tau: float = Field(..., description="Departure from the previous port")
    t_entry: float = Field(..., description="Entry into the port geofence")
    berth_start: float
    berth_end: float
    service_hours: float
    waiting_hours: float = Field(..., ge=0.0)
    sailing_hours: float = Field(0.0, ge=0.0)
    sailing_km: float = Field(0.0, ge=0.0)

    @field_validator("vessel_id", mode="before")
    @classmethod
    def coerce_id(cls, v):
        return str(v)

    @model_validator(mode="after")
    def check_ordering(self):
        if not self.tau < self.t_entry <= self.berth_start < self.berth_end:
            raise ValueError("voyage must satisfy tau < t_entry <= berth_start < berth_end")
        return self


class CleaningReport(BaseModel):
    """Tallies from ingestion and detection."""

    rows_read: int = 0
    malformed_rows: int = 0
    malformed_lines: List[int] = Field(default_factory=list)
    speed_filtered: int = 0
    duplicates_removed: int = 0
    vessels: int = 0
    type_filtered_vessels: int = 0
    frame_callers: int = 0
    entries: int = 0
    incomplete_voyages: int = 0
    entries_without_berth: int = 0
    unattributed_berth_blocks: int = 0
    ambiguous_berth_blocks: int = 0


class GammaCalibration(BaseModel):
    """Effective service time estimated from port-wide berth starts."""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(..., gt=0.0)
    events: int = Field(..., description="Distinct berth starts")
    intervals: int = Field(..., description="Consecutive differences before filtering")
    kept_intervals: int = Field(..., description="Intervals above min_interval_hours")
    trimmed_per_tail: int


class PipelineResult(BaseModel):
    """Everything an ingest run produces."""

    voyages: List[Voyage]
    berth_starts: List[float]
    gamma: float
    calibration: Optional[GammaCalibration] = None
    report: CleaningReport
    epoch: datetime
