"""
Great-circle distances on a spherical Earth.
"""
from math import asin, cos, radians, sin, sqrt
from typing import Tuple

import numpy as np

from core import constants
from core.exceptions import CoordinateException

LatLon = Tuple[float, float]


def check_coordinates(lat: float, lon: float) -> None:
    """
    Raises:
        CoordinateException: latitude outside [-90, 90] or longitude outside [-180, 180]
    """
    if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
        raise CoordinateException("Coordinate out of range", {"lat": lat, "lon": lon})


def haversine_km(p1: LatLon, p2: LatLon) -> float:
    """
    Haversine distance in kilometres between two (lat, lon) points in degrees.

    Example:
        >>> round(haversine_km((-20.31, 118.57), (-19.31, 118.57)), 2)
        111.19
    """
    lat1, lon1 = p1
    lat2, lon2 = p2
    check_coordinates(lat1, lon1)
    check_coordinates(lat2, lon2)

    lat1, lon1, lat2, lon2 = map(radians, [lat1, lon1, lat2, lon2])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = sin(dlat / 2) ** 2 + cos(lat1) * cos(lat2) * sin(dlon / 2) ** 2
    return 2 * constants.EARTH_RADIUS_KM * asin(sqrt(min(1.0, a)))


def haversine_km_vectorized(lats1, lons1, lats2, lons2) -> np.ndarray:
    """Element-wise haversine distances in kilometres; scalars broadcast (e.g. a port centre)."""
    lats1, lons1, lats2, lons2 = (np.radians(np.asarray(x, dtype=float)) for x in (lats1, lons1, lats2, lons2))

    a = np.sin((lats2 - lats1) / 2) ** 2 + np.cos(lats1) * np.cos(lats2) * np.sin((lons2 - lons1) / 2) ** 2
    return 2 * constants.EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.minimum(1.0, a)))


def frame_distance_deg(lats, lons, center_lat: float, center_lon: float) -> np.ndarray:
    """Planar distance in degrees, used for the coarse sampling-frame circle."""
    return np.hypot(np.asarray(lats, dtype=float) - center_lat, np.asarray(lons, dtype=float) - center_lon)
