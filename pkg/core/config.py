from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from core import constants
from core.exceptions import ConfigurationException

WINDOW_SPLITS = ("none", "day", "week")


class RunConfig(BaseSettings):
    # --- Port geometry ---
    center_lat: float = Field(constants.PORT_CENTER_LAT, description="Port centre latitude")
    center_lon: float = Field(constants.PORT_CENTER_LON, description="Port centre longitude")
    r_frame_deg: float = Field(constants.DEFAULT_R_FRAME_DEG, description="Sampling-frame radius (degrees)")
    r_port_km: float = Field(constants.DEFAULT_R_PORT_KM, description="Port geofence radius (km)")
    r_berth_km: float = Field(constants.DEFAULT_R_BERTH_KM, description="Berth geofence radius (km)")

    # --- Speed thresholds ---
    v_stop_kn: float = Field(constants.DEFAULT_V_STOP_KN, description="Stop speed threshold (knots)")
    v_go_kn: float = Field(constants.DEFAULT_V_GO_KN, description="Acceleration threshold (knots)")

    # --- Episode thresholds (hours) ---
    min_stop_hours: float = Field(constants.DEFAULT_MIN_STOP_HOURS, description="Minimum stop episode length")
    berth_min_hours: float = Field(constants.DEFAULT_BERTH_MIN_HOURS, description="Shortest plausible berth stay")
    berth_max_hours: float = Field(constants.DEFAULT_BERTH_MAX_HOURS, description="Longest plausible berth stay")
    min_interval_hours: float = Field(
        constants.DEFAULT_MIN_INTERVAL_HOURS, description="Smallest berth-start interval kept for calibration"
    )
    trim: float = Field(constants.DEFAULT_TRIM, description="Trimmed-mean fraction per tail")
    gap_break_hours: float = Field(constants.DEFAULT_GAP_BREAK_HOURS, description="Record gap that breaks an episode")
    min_calibration_events: int = Field(
        constants.DEFAULT_MIN_CALIBRATION_EVENTS, description="Berth starts required to calibrate gamma"
    )

    # --- Game ---
    gamma: Optional[float] = Field(None, description="Effective service time override (hours)")
    eps_tie: float = Field(constants.DEFAULT_EPS_TIE, description="Arrival tie tolerance (hours)")
    eps_green: float = Field(constants.DEFAULT_EPS_GREEN, description="Offset below an open supremum (hours)")
    eps_probe: float = Field(constants.DEFAULT_EPS_PROBE, description="Deviation probe offset (hours)")
    enumeration_cap: int = Field(constants.DEFAULT_ENUMERATION_CAP, description="Largest enumerable tie block")

    # --- Monte Carlo ---
    seed: int = Field(constants.DEFAULT_SEED, description="Root seed for every random stream")
    samples: int = Field(constants.DEFAULT_SAMPLES, description="Monte Carlo samples per estimate")

    # --- Reports ---
    slack_bin_hours: float = Field(constants.DEFAULT_SLACK_BIN_HOURS, description="Slack histogram bin width")
    waiting_bin_hours: float = Field(constants.DEFAULT_WAITING_BIN_HOURS, description="Waiting histogram bin width")
    window_split: str = Field("none", description="Split the slack game by day or week")

    # --- Paths ---
    input: Optional[str] = Field(None, description="Input file path")
    metadata: Optional[str] = Field(None, description="Optional vessel metadata CSV")
    out_dir: str = Field("output", description="Output directory")

    # Vessels kept when metadata is supplied (case-insensitive)
    allowed_ship_types: Union[List[str], str] = Field(
        default_factory=lambda: list(constants.DEFAULT_ALLOWED_SHIP_TYPES)
    )

    # --- Logging ---
    log_level: str = Field(constants.DEFAULT_LOG_LEVEL, description="Logging level")
    log_file: str = Field(constants.DEFAULT_LOG_FILE, description="Log file path (empty disables)")
    log_format: str = Field(constants.DEFAULT_LOG_FORMAT, description="Log file format (text/json)")
    log_max_bytes: int = Field(constants.DEFAULT_LOG_MAX_BYTES, description="Max log file size")
    log_backup_count: int = Field(constants.DEFAULT_LOG_BACKUP_COUNT, description="Log backup count")

    model_config = SettingsConfigDict(
        env_prefix="PORTGAME_",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("allowed_ship_types", mode="before")
    @classmethod
    def parse_ship_types(cls, v):
        if isinstance(v, str):
            # Config files carry a comma-separated list
            return [item.strip() for item in v.split(",") if item.strip()]
        return v

    @field_validator("window_split")
    @classmethod
    def check_window_split(cls, v):
        v = v.strip().lower()
        if v not in WINDOW_SPLITS:
            raise ValueError(f"window_split must be one of {', '.join(WINDOW_SPLITS)}")
        return v

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, v):
        if v is not None and v <= 0:
            raise ValueError("gamma must be positive")
        return v

    def validate_all(self) -> List[str]:
        """
        Validate cross-field constraints.
        Returns a list of problems; empty when the configuration is usable.
        """
        errors = []

        if not self.r_berth_km < self.r_port_km:
            errors.append("r_berth_km must be smaller than r_port_km")
        if not self.v_stop_kn < self.v_go_kn:
            errors.append("v_stop_kn must be smaller than v_go_kn")
        if not self.berth_min_hours < self.berth_max_hours:
            errors.append("berth_min_hours must be smaller than berth_max_hours")
        if not 0.0 <= self.trim < 0.5:
            errors.append("trim must lie in [0, 0.5)")
        for name in ("eps_tie", "eps_green", "eps_probe", "gap_break_hours", "r_frame_deg"):
            if getattr(self, name) <= 0:
                errors.append(f"{name} must be positive")
        if self.samples < 1:
            errors.append("samples must be at least 1")
        if self.enumeration_cap < 1:
            errors.append("enumeration_cap must be at least 1")

        return errors

    @classmethod
    def resolve(
        cls,
        overrides: Optional[Dict[str, Any]] = None,
        config_path: Optional[str] = None,
    ) -> "RunConfig":
        """
        Build the effective configuration.

        Precedence: explicit overrides (CLI flags) > config file > environment > defaults.
        The config file is flat key=value text keyed by field name.

        Raises:
            ConfigurationException: unreadable file, unknown keys, or invalid values
        """
        values: Dict[str, Any] = {}

        if config_path:
            path = Path(config_path)
            if not path.is_file():
                raise ConfigurationException("Config file not found", {"path": config_path})
            file_values = {k.strip().lower(): v for k, v in dotenv_values(path).items() if v is not None}
            unknown = sorted(set(file_values) - set(cls.model_fields))
            if unknown:
                raise ConfigurationException(
                    "Unknown config keys", {"path": config_path, "keys": ",".join(unknown)}
                )
            values.update(file_values)

        values.update({k: v for k, v in (overrides or {}).items() if v is not None})

        try:
            config = cls(**values)
        except ValidationError as e:
            raise ConfigurationException("Invalid configuration", {"errors": e.error_count()}) from e

        problems = config.validate_all()
        if problems:
            raise ConfigurationException("Invalid configuration", {"problems": "; ".join(problems)})
        return config


settings = RunConfig()
