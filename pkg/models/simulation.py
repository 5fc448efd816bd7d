from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PriorSpec(BaseModel):
    """
    Common prior over type profiles: n i.i.d. draws on [low, high].

    `custom` priors are given as a tabulated density on an increasing grid
    spanning the support; values must be strictly positive.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform", "custom"] = "uniform"
    low: float = 0.0
    high: float = 1.0
    n: int = Field(2, ge=1)
    density_grid: Optional[List[float]] = None
    density_values: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_support(self):
        if not self.low < self.high:
            raise ValueError("support must satisfy low < high")
        if self.kind == "custom":
            grid, values = self.density_grid, self.density_values
            if not grid or not values or len(grid) != len(values) or len(grid) < 2:
                raise ValueError("custom prior needs matching density_grid and density_values")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError("density_grid must be strictly increasing")
            if grid[0] != self.low or grid[-1] != self.high:
                raise ValueError("density_grid must span [low, high]")
            if any(v <= 0 for v in values):
                raise ValueError("density must be strictly positive on the support")
        return self


class StrategyFunction(BaseModel):
    """Map from own type to arrival time."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["truthful", "shift", "tabulated"] = "truthful"
    shift: float = Field(0.0, ge=0.0)
    window: Optional[Tuple[float, float]] = None
    grid_types: Optional[List[float]] = None
    grid_arrivals: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "shift" and self.window is not None and self.window[1] < self.window[0]:
            raise ValueError("shift window must satisfy a <= b")
        if self.kind == "tabulated":
            if not self.grid_types or not self.grid_arrivals or len(self.grid_types) != len(self.grid_arrivals):
                raise ValueError("tabulated strategy needs matching grids")
            if any(s < t for t, s in zip(self.grid_types, self.grid_arrivals)):
                raise ValueError("tabulated arrivals must not precede their types")
        return self

    @classmethod
    def truthful(cls) -> "StrategyFunction":
        return cls(kind="truthful")

    @classmethod
    def shifted(cls, shift: float, window: Optional[Tuple[float, float]] = None) -> "StrategyFunction":
        return cls(kind="shift", shift=shift, window=window)

    def apply(self, types: np.ndarray) -> np.ndarray:
        """Arrivals for an array of own types; never earlier than the type."""
        types = np.asarray(types, dtype=float)
        if self.kind == "truthful":
            return types.copy()
        if self.kind == "shift":
            if self.window is None:
                return types + self.shift
            a, b = self.window
            inside = (types >= a) & (types <= b)
            return np.where(inside, types + self.shift, types)
        arrivals = np.interp(types, self.grid_types, self.grid_arrivals)
        return np.maximum(arrivals, types)


class McEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    half_width_95: float = Field(..., ge=0.0)
    samples: int
    seed: int

    @property
    def lower(self) -> float:
        return self.mean - self.half_width_95

    @property
    def upper(self) -> float:
        return self.mean + self.half_width_95


class ScanRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    arrival: float
    estimate: McEstimate


class BestResponseScan(BaseModel):
    model_config = ConfigDict(frozen=True)

    player: int
    own_type: float
    best_arrival: float
    rows: List[ScanRow]


class DeviationCell(BaseModel):
    """One row of the deviation-gain table."""

    model_config = ConfigDict(frozen=True)

    n: int
    gamma: float
    shift: float
    window: Tuple[float, float]
    gain: McEstimate

    @property
    def non_positive_at_95(self) -> bool:
        return self.gain.upper <= 0.0
