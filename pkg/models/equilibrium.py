import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EquilibriumInterval(BaseModel):
    """Nash set of one player given the earlier players' choices."""

    model_config = ConfigDict(frozen=True)

    player: int
    lower: float = Field(..., description="Always the player's type")
    upper: float
    upper_closed: bool
    is_singleton: bool
    theta: float = Field(..., description="Service termination of the predecessor chain")

    @model_validator(mode="after")
    def check_shape(self):
        if self.is_singleton and self.upper != self.lower:
            raise ValueError("singleton set must have lower == upper")
        if self.upper < self.lower:
            raise ValueError("upper bound below lower bound")
        return self

    def contains(self, x: float, tolerance: float = 0.0) -> bool:
        if self.is_singleton:
            return abs(x - self.lower) <= tolerance
        if x < self.lower - tolerance:
            return False
        if self.upper_closed:
            return x <= self.upper + tolerance
        return x < self.upper

    def supremum_choice(self, eps_green: float) -> float:
        """
        Latest arrival inside the set.

        An open upper end is not attained; the choice then sits eps_green
        below it, never below the player's type.
        """
        if self.is_singleton or self.upper_closed:
            return self.upper
        return max(self.lower, self.upper - eps_green)


class NashVerdict(BaseModel):
    """Outcome of a brute-force deviation scan."""

    is_equilibrium: bool
    player: Optional[int] = None
    deviation: Optional[float] = None
    current_service_time: Optional[float] = None
    improved_service_time: Optional[float] = None

    @property
    def improvement(self) -> float:
        if self.is_equilibrium:
            return 0.0
        return self.current_service_time - self.improved_service_time


class SlackEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    player: int
    label: str = ""
    window: str = ""
    type_time: float
    predecessor_completion: float
    slack: float = Field(..., ge=0.0)


class SlackReport(BaseModel):
    """Per-voyage slack with its headline aggregates."""

    model_config = ConfigDict(frozen=True)

    entries: List[SlackEntry] = Field(default_factory=list)
    mean: float = 0.0
    median: float = 0.0
    total: float = 0.0
    count_positive: int = 0

    @property
    def count(self) -> int:
        return len(self.entries)

    @property
    def slacks(self) -> List[float]:
        return [e.slack for e in self.entries]

    @model_validator(mode="after")
    def check_total(self):
        expected = math.fsum(e.slack for e in self.entries)
        if abs(expected - self.total) > 1e-9:
            raise ValueError("total must equal the sum of per-voyage slack")
        return self


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: float
    count: int


class DistributionSummary(BaseModel):
    """Descriptive statistics of a nonnegative duration sample."""

    model_config = ConfigDict(frozen=True)

    count: int = 0
    mean: Optional[float] = None
    median: Optional[float] = None
    trimmed_mean: Optional[float] = None
    total: float = 0.0
    share_zero: Optional[float] = None
    bin_width: float
    histogram: List[HistogramBin] = Field(default_factory=list)
