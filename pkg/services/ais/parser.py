"""
AIS CSV ingestion and cleaning.

Rows are read as text and coerced column by column so one bad value only
costs its own row; such rows are counted with their file line numbers.
"""
import re
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd

from core import constants
from core.exceptions import InputFileException
from core.logger import get_logger
from core.utils import hours_since
from models.voyage import CleaningReport, GeofenceParams
from services.ais.geo import frame_distance_deg, haversine_km_vectorized

logger = get_logger(__name__)

_LINE_PATTERN = re.compile(r"line (\d+)")


def _read_csv(path: Union[str, Path], columns: Iterable[str], label: str) -> pd.DataFrame:
    columns = list(columns)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        logger.warning(f"[AIS] {label} file is empty", context={"path": str(path)})
        return pd.DataFrame(columns=columns)
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        raise InputFileException(
            f"Cannot parse {label} file",
            {"path": str(path), "line": int(match.group(1)) if match else None},
        ) from e
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileException(f"Cannot read {label} file", {"path": str(path), "error": str(e)}) from e

    frame.columns = [c.strip().lower() for c in frame.columns]
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise InputFileException(
            f"{label} file is missing columns",
            {"path": str(path), "line": 1, "missing": ",".join(missing)},
        )
    return frame[columns]


def read_ais_csv(path: Union[str, Path]) -> pd.DataFrame:
    """
    Read `vessel_id,timestamp,lat,lon,sog` as raw text columns.

    Raises:
        InputFileException: unreadable file, tokenizer error (with line), missing header columns
    """
    return _read_csv(path, constants.AIS_COLUMNS, "AIS")


def read_metadata_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read the optional `vessel_id,ship_type` file."""
    frame = _read_csv(path, constants.METADATA_COLUMNS, "metadata")
    return frame.assign(
        vessel_id=frame["vessel_id"].str.strip(),
        ship_type=frame["ship_type"].str.strip().str.lower(),
    )


def parse_and_clean(raw: pd.DataFrame) -> Tuple[pd.DataFrame, CleaningReport]:
    """
    Coerce, validate, filter and order AIS records.

    Returns:
        Records sorted by (vessel_id, timestamp) with one row per timestamp,
        and the cleaning tallies
    """
    report = CleaningReport(rows_read=len(raw))
    if raw.empty:
        return pd.DataFrame(columns=list(constants.AIS_COLUMNS)), report

    frame = pd.DataFrame(
        {
            "vessel_id": raw["vessel_id"].astype(str).str.strip(),
            "timestamp": pd.to_datetime(raw["timestamp"].str.strip(), utc=True, errors="coerce", format="ISO8601"),
            "lat": pd.to_numeric(raw["lat"], errors="coerce"),
            "lon": pd.to_numeric(raw["lon"], errors="coerce"),
            "sog": pd.to_numeric(raw["sog"], errors="coerce"),
        },
        index=raw.index,
    )

    malformed = (
        (frame["vessel_id"] == "")
        | frame[["timestamp", "lat", "lon", "sog"]].isna().any(axis=1)
        | ~np.isfinite(frame[["lat", "lon", "sog"]].fillna(0.0)).all(axis=1)
        | ~frame["lat"].between(-90.0, 90.0)
        | ~frame["lon"].between(-180.0, 180.0)
    )
    if malformed.any():
        # header is line 1
        report.malformed_lines = [int(i) + 2 for i in frame.index[malformed]]
        report.malformed_rows = len(report.malformed_lines)
        logger.warning(
            "[AIS] Skipped malformed rows",
            context={"count": report.malformed_rows, "first_line": report.malformed_lines[0]},
        )
    frame = frame[~malformed]

    in_range = frame["sog"].between(constants.MIN_VALID_SOG_KN, constants.MAX_VALID_SOG_KN)
    report.speed_filtered = int((~in_range).sum())
    frame = frame[in_range]

    frame = frame.sort_values(["vessel_id", "timestamp"], kind="mergesort")
    deduplicated = frame.drop_duplicates(subset=["vessel_id", "timestamp"], keep="first")
    report.duplicates_removed = len(frame) - len(deduplicated)

    frame = deduplicated.reset_index(drop=True)
    report.vessels = int(frame["vessel_id"].nunique())
    logger.info(
        "[AIS] Records cleaned",
        context={
            "read": report.rows_read,
            "kept": len(frame),
            "malformed": report.malformed_rows,
            "speed_filtered": report.speed_filtered,
            "duplicates": report.duplicates_removed,
        },
    )
    return frame, report


def filter_ship_types(
    frame: pd.DataFrame,
    metadata: Optional[pd.DataFrame],
    allowed: Iterable[str],
) -> Tuple[pd.DataFrame, int]:
    """
    Keep vessels whose metadata ship type is allowed (case-insensitive).

    Without metadata every vessel passes; vessels missing from the metadata
    are dropped.

    Returns:
        Filtered records and the number of vessels removed
    """
    if metadata is None:
        return frame, 0

    allowed = {a.strip().lower() for a in allowed}
    ship_types = metadata["ship_type"].astype(str).str.strip().str.lower()
    keep_ids = set(metadata.loc[ship_types.isin(allowed), "vessel_id"].astype(str).str.strip())
    before = frame["vessel_id"].nunique()
    filtered = frame[frame["vessel_id"].isin(keep_ids)].reset_index(drop=True)
    removed = before - filtered["vessel_id"].nunique()
    if removed:
        logger.info("[AIS] Vessels removed by ship type", context={"removed": removed})
    return filtered, int(removed)


def annotate(frame: pd.DataFrame, params: GeofenceParams, epoch) -> pd.DataFrame:
    """Add hours since epoch, distance to the port centre (km) and frame distance (degrees)."""
    return frame.assign(
        hours=hours_since(epoch, frame["timestamp"]),
        dist_km=haversine_km_vectorized(frame["lat"], frame["lon"], params.center_lat, params.center_lon),
        frame_deg=frame_distance_deg(frame["lat"], frame["lon"], params.center_lat, params.center_lon),
    )


def split_by_vessel(frame: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """Per-vessel series keyed by vessel_id, in vessel_id order."""
    return {str(vessel_id): group.reset_index(drop=True) for vessel_id, group in frame.groupby("vessel_id", sort=True)}
