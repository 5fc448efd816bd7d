import pytest
from typing import Callable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from models.game import StrategyProfile, TypeProfile
from models.voyage import GeofenceParams, Voyage

# =============================================================================
# Game Fixtures
# =============================================================================


@pytest.fixture
def worked_types() -> TypeProfile:
    """The three-vessel worked example: t = (0, 0.5, 3), gamma = 1."""
    return TypeProfile.from_types([0.0, 0.5, 3.0], 1.0)


@pytest.fixture
def make_profile() -> Callable[..., StrategyProfile]:
    """Build a strategy profile whose types equal the sorted arrivals unless given."""

    def _make(arrivals: Sequence[float], gamma: float, types: Sequence[float] = None, t0: float = None):
        owner = TypeProfile.from_types(sorted(types if types is not None else arrivals), gamma, t0)
        return StrategyProfile.build(list(arrivals), owner)

    return _make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# =============================================================================
# AIS Fixtures
# =============================================================================


@pytest.fixture
def params() -> GeofenceParams:
    return GeofenceParams()


@pytest.fixture
def make_series() -> Callable[[List[Tuple[float, float, float]]], pd.DataFrame]:
    """
    Annotated single-vessel series from (hours, dist_km, sog) rows.

    Points lie due north of the centre, so the frame distance is the
    distance in degrees of latitude.
    """
    from services.ais.synthetic import KM_PER_DEGREE

    def _make(rows):
        hours, dist, sog = zip(*rows) if rows else ((), (), ())
        dist = np.asarray(dist, dtype=float)
        return pd.DataFrame(
            {
                "hours": np.asarray(hours, dtype=float),
                "dist_km": dist,
                "frame_deg": dist / KM_PER_DEGREE,
                "sog": np.asarray(sog, dtype=float),
            }
        )

    return _make


@pytest.fixture
def make_voyage() -> Callable[..., Voyage]:
    """Voyage with a given entry; berth and departure are placed around it."""

    def _make(vessel_id: str, t_entry: float, waiting: float = 0.0, service: float = 36.0) -> Voyage:
        berth_start = t_entry + waiting
        return Voyage(
            vessel_id=vessel_id,
            tau=t_entry - 20.0,
            t_entry=t_entry,
            berth_start=berth_start,
            berth_end=berth_start + service,
            service_hours=service,
            waiting_hours=waiting,
            sailing_hours=20.0,
            sailing_km=500.0,
        )

    return _make


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory):
    """Synthetic AIS corpus written to disk once per session."""
    from services.ais.synthetic import AIS_FILE, METADATA_FILE, generate_synthetic_corpus

    directory = tmp_path_factory.mktemp("synthetic")
    ais, metadata = generate_synthetic_corpus()
    ais.to_csv(directory / AIS_FILE, index=False, lineterminator="\n")
    metadata.to_csv(directory / METADATA_FILE, index=False, lineterminator="\n")
    return directory
