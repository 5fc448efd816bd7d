"""
Core utility functions shared across modules.
Time handling (UTC instants vs. hour offsets from a dataset epoch) and
content digests for run manifests.
"""
import hashlib
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterable, List, Union

import pandas as pd
import pytz

UTC = pytz.UTC

SECONDS_PER_HOUR = 3600.0


def to_utc(dt: datetime) -> datetime:
    """
    Convert any datetime to UTC.

    Args:
        dt: Datetime object (aware or naive)

    Returns:
        Datetime in UTC timezone
    """
    if dt.tzinfo is None:
        # Assume naive datetime is already UTC
        return UTC.localize(dt)
    return dt.astimezone(UTC)


def dataset_epoch(timestamps: Union[pd.Series, Iterable[datetime]]) -> datetime:
    """
    Epoch for hour offsets: UTC midnight of the earliest timestamp.

    Args:
        timestamps: Non-empty collection of instants

    Returns:
        Timezone-aware UTC datetime
    """
    series = timestamps if isinstance(timestamps, pd.Series) else pd.Series(list(timestamps))
    earliest = pd.to_datetime(series, utc=True).min()
    return earliest.floor("D").to_pydatetime()


def hours_since(epoch: datetime, timestamps: pd.Series) -> pd.Series:
    """Offsets in hours of each timestamp relative to epoch."""
    return (timestamps - pd.Timestamp(epoch)).dt.total_seconds() / SECONDS_PER_HOUR


def instant_from_hours(epoch: datetime, hours: float) -> datetime:
    """Inverse of hours_since for a single offset."""
    return to_utc(epoch) + timedelta(seconds=round(hours * SECONDS_PER_HOUR, 6))


def format_instant(dt: datetime) -> str:
    """ISO 8601 UTC rendering with a trailing Z."""
    return to_utc(dt).strftime("%Y-%m-%dT%H:%M:%SZ")


def calculate_file_digest(path: Union[str, Path]) -> str:
    """
    SHA-256 digest of a file's bytes.

    Args:
        path: File to hash

    Returns:
        SHA-256 hex string
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def parse_float_list(text: str) -> List[float]:
    """Parse a comma-separated list of numbers such as '0,0.5,3'."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    return [float(item) for item in items]
