"""
Port-call event detectors working on one vessel's annotated series.

Every series carries `hours`, `dist_km`, `frame_deg` and `sog` columns,
sorted by time. A distance equal to a radius counts as inside.
"""
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from models.voyage import GeofenceParams

Episode = Tuple[int, int]


def find_episodes(hours: np.ndarray, mask: np.ndarray, gap_break: float, min_duration: float) -> List[Episode]:
    """
    Maximal runs of consecutive qualifying records lasting at least min_duration.

    A run breaks on a non-qualifying record or on a gap longer than
    gap_break between neighbours. Duration is last minus first timestamp.

    Returns:
        (first_index, last_index) pairs, inclusive
    """
    hours = np.asarray(hours, dtype=float)
    idx = np.flatnonzero(np.asarray(mask, dtype=bool))
    if idx.size == 0:
        return []

    breaks = (np.diff(idx) != 1) | (np.diff(hours[idx]) > gap_break)
    starts = np.r_[0, np.flatnonzero(breaks) + 1]
    ends = np.r_[np.flatnonzero(breaks), idx.size - 1]

    episodes = []
    for s, e in zip(starts, ends):
        first, last = int(idx[s]), int(idx[e])
        if hours[last] - hours[first] >= min_duration:
            episodes.append((first, last))
    return episodes


def detect_frame_membership(series: pd.DataFrame, params: GeofenceParams) -> bool:
    """True when the vessel stops (sog <= v_stop) inside the coarse frame circle long enough."""
    if series.empty:
        return False
    mask = (series["frame_deg"].to_numpy() <= params.r_frame_deg) & (series["sog"].to_numpy() <= params.v_stop_kn)
    return bool(find_episodes(series["hours"].to_numpy(), mask, params.gap_break_hours, params.min_stop_hours))


def detect_port_entries(series: pd.DataFrame, params: GeofenceParams) -> List[float]:
    """Instants where the port-geofence indicator switches from outside to inside."""
    if series.empty:
        return []
    inside = series["dist_km"].to_numpy() <= params.r_port_km
    switches = np.flatnonzero(inside[1:] & ~inside[:-1]) + 1
    hours = series["hours"].to_numpy()
    return [float(hours[k]) for k in switches]


def detect_departure(series: pd.DataFrame, t_entry: float, params: GeofenceParams) -> Optional[float]:
    """
    Departure instant from the previous port ahead of one entry.

    Looks at records after the vessel last left the port geofence and before
    t_entry, takes the last stop outside the geofence (sog < v_stop for at
    least min_stop_hours), then the first later record faster than v_go. When
    the vessel never reaches v_go the end of the stop is used.

    Returns:
        Departure hours, or None when no qualifying stop exists
    """
    hours = series["hours"].to_numpy()
    dist = series["dist_km"].to_numpy()
    sog = series["sog"].to_numpy()

    before = hours < t_entry
    inside_before = np.flatnonzero(before & (dist <= params.r_port_km))
    first = int(inside_before[-1]) + 1 if inside_before.size else 0
    window = before.copy()
    window[:first] = False

    mask = window & (dist > params.r_port_km) & (sog < params.v_stop_kn)
    episodes = find_episodes(hours, mask, params.gap_break_hours, params.min_stop_hours)
    if not episodes:
        return None

    _, stop_end = episodes[-1]
    after = np.flatnonzero(window & (np.arange(hours.size) > stop_end) & (sog > params.v_go_kn))
    if after.size:
        return float(hours[after[0]])
    return float(hours[stop_end])


def detect_berth_blocks(series: pd.DataFrame, params: GeofenceParams) -> List[Tuple[float, float]]:
    """
    Berth stays: stops inside the berth geofence lasting at least min_stop_hours,
    kept only when their duration lies within [berth_min, berth_max].
    """
    if series.empty:
        return []
    hours = series["hours"].to_numpy()
    mask = (series["dist_km"].to_numpy() <= params.r_berth_km) & (series["sog"].to_numpy() < params.v_stop_kn)

    blocks = []
    for first, last in find_episodes(hours, mask, params.gap_break_hours, params.min_stop_hours):
        start, end = float(hours[first]), float(hours[last])
        if params.berth_min_hours <= end - start <= params.berth_max_hours:
            blocks.append((start, end))
    return blocks
