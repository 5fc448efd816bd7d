"""
Sampling type profiles from a common prior.
Custom densities are sampled by inverting the tabulated CDF.
"""
from typing import List, Optional, Union

import numpy as np
from pydantic import ValidationError
from scipy.integrate import cumulative_trapezoid

from core.exceptions import SimulationException
from models.simulation import PriorSpec

SeedLike = Union[int, np.random.SeedSequence]


def build_prior(
    kind: str = "uniform",
    low: float = 0.0,
    high: float = 1.0,
    n: int = 2,
    density_grid: Optional[List[float]] = None,
    density_values: Optional[List[float]] = None,
) -> PriorSpec:
    """
    Validated PriorSpec constructor.

    Raises:
        SimulationException: invalid support, player count or density table
    """
    try:
        return PriorSpec(
            kind=kind,
            low=low,
            high=high,
            n=n,
            density_grid=density_grid,
            density_values=density_values,
        )
    except ValidationError as e:
        raise SimulationException("Invalid prior", {"reason": e.errors()[0]["msg"]}) from e


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed))


def sample_type_matrix(prior: PriorSpec, samples: int, seed: SeedLike) -> np.ndarray:
    """Draw `samples` i.i.d. type vectors; shape (samples, n), columns are players."""
    if samples < 1:
        raise SimulationException("samples must be at least 1", {"samples": samples})

    rng = _rng(seed)
    shape = (samples, prior.n)
    if prior.kind == "uniform":
        return rng.uniform(prior.low, prior.high, size=shape)

    grid = np.asarray(prior.density_grid, dtype=float)
    cdf = cumulative_trapezoid(np.asarray(prior.density_values, dtype=float), grid, initial=0.0)
    cdf /= cdf[-1]
    return np.interp(rng.random(size=shape), cdf, grid)


def sample_type_profile(prior: PriorSpec, seed: SeedLike) -> np.ndarray:
    """One type vector (unsorted, one entry per player), deterministic in seed."""
    return sample_type_matrix(prior, 1, seed)[0]
