import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core import constants
from core.exceptions import ProfileException


class TypeProfile(BaseModel):
    """A game instance: sorted earliest feasible arrivals, service time and boundary."""

    model_config = ConfigDict(frozen=True)

    types: List[float] = Field(..., description="Earliest feasible arrival per player, nondecreasing (hours)")
    gamma: float = Field(..., description="Service time per vessel (hours)")
    t0: Optional[float] = Field(None, description="Initial service-availability boundary; defaults to t1")

    @field_validator("types")
    @classmethod
    def check_types(cls, v):
        if not v:
            raise ValueError("at least one player is required")
        if any(not math.isfinite(t) for t in v):
            raise ValueError("types must be finite")
        for a, b in zip(v, v[1:]):
            if b < a:
                raise ValueError(f"types must be nondecreasing ({a} > {b})")
        return v

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, v):
        if not v > 0:
            raise ValueError("gamma must be positive")
        return v

    @model_validator(mode="before")
    @classmethod
    def default_t0(cls, data):
        # t0 = t1 means no initial backlog
        if isinstance(data, dict) and data.get("t0") is None and data.get("types"):
            data = {**data, "t0": min(data["types"])}
        return data

    @field_validator("t0")
    @classmethod
    def check_t0(cls, v):
        if v is not None and not math.isfinite(v):
            raise ValueError("t0 must be finite")
        return v

    @classmethod
    def from_types(
        cls,
        types: List[float],
        gamma: float,
        t0: Optional[float] = None,
    ) -> "TypeProfile":
        """
        Validated constructor that reports problems as ProfileException.

        Raises:
            ProfileException: unsorted or empty types, non-positive gamma
        """
        try:
            return cls(types=list(types), gamma=gamma, t0=t0)
        except ValidationError as e:
            raise ProfileException(
                "Invalid type profile",
                {"reason": e.errors()[0]["msg"], "n": len(types)},
            ) from e

    @property
    def n(self) -> int:
        return len(self.types)

    def next_type(self, i: int) -> float:
        """t_{i+1}, with infinity past the last player."""
        return self.types[i + 1] if i + 1 < self.n else math.inf

    def check_player(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise ProfileException("Player index out of range", {"player": i, "n": self.n})


class ServiceOrder(BaseModel):
    """Bijection from service positions (0-based) to players, with its inverse."""

    model_config = ConfigDict(frozen=True)

    order: List[int]

    @field_validator("order")
    @classmethod
    def check_permutation(cls, v):
        if sorted(v) != list(range(len(v))):
            raise ValueError("order must be a permutation of 0..n-1")
        return v

    @property
    def inverse(self) -> List[int]:
        """Position of each player."""
        inv = [0] * len(self.order)
        for position, player in enumerate(self.order):
            inv[player] = position
        return inv


class StrategyProfile(BaseModel):
    """Chosen arrival times for every player of a TypeProfile."""

    model_config = ConfigDict(frozen=True)

    arrivals: List[float]
    owner: TypeProfile
    tie_tolerance: float = Field(constants.DEFAULT_EPS_TIE, ge=0.0)

    @model_validator(mode="after")
    def check_feasible(self):
        if len(self.arrivals) != self.owner.n:
            raise ValueError(f"expected {self.owner.n} arrivals, got {len(self.arrivals)}")
        for i, (s, t) in enumerate(zip(self.arrivals, self.owner.types)):
            if not math.isfinite(s):
                raise ValueError(f"arrival of player {i} must be finite")
            if s < t:
                raise ValueError(f"player {i} arrives at {s} before its type {t}")
        return self

    @classmethod
    def build(
        cls,
        arrivals: List[float],
        owner: TypeProfile,
        tie_tolerance: float = constants.DEFAULT_EPS_TIE,
    ) -> "StrategyProfile":
        """
        Validated constructor that reports problems as ProfileException.

        Raises:
            ProfileException: wrong length or an arrival earlier than its type
        """
        try:
            return cls(arrivals=list(arrivals), owner=owner, tie_tolerance=tie_tolerance)
        except ValidationError as e:
            raise ProfileException(
                "Infeasible strategy profile",
                {"reason": e.errors()[0]["msg"]},
            ) from e

    @property
    def n(self) -> int:
        return len(self.arrivals)

    @property
    def gamma(self) -> float:
        return self.owner.gamma

    @property
    def t0(self) -> float:
        return self.owner.t0

    def tie_blocks(self) -> List[List[int]]:
        """Maximal groups of players whose arrivals chain within tie_tolerance, in arrival order."""
        return tie_blocks(self.arrivals, self.tie_tolerance)

    def effective_arrivals(self) -> List[float]:
        """Arrivals with every tie block snapped to its earliest member."""
        effective = list(self.arrivals)
        for block in self.tie_blocks():
            anchor = self.arrivals[block[0]]
            for player in block:
                effective[player] = anchor
        return effective

    def canonical_order(self) -> ServiceOrder:
        """Arrival order with ties broken by player index."""
        return ServiceOrder(order=[p for block in self.tie_blocks() for p in block])

    def with_arrival(self, i: int, arrival: float) -> "StrategyProfile":
        """Copy with player i moved to a new arrival (unilateral deviation)."""
        self.owner.check_player(i)
        arrivals = list(self.arrivals)
        arrivals[i] = arrival
        return StrategyProfile.build(arrivals, self.owner, self.tie_tolerance)


class QueueOutcome(BaseModel):
    """Per-player queue statistics under a strategy profile."""

    model_config = ConfigDict(frozen=True)

    waiting: List[float] = Field(..., description="Waiting under the canonical service order")
    expected_waiting: List[float]
    expected_order: List[float] = Field(..., description="1-based expected service position")
    expected_service_time: List[float]
    completion: List[float] = Field(..., description="Expected service time plus gamma")


def tie_blocks(arrivals: List[float], tolerance: float) -> List[List[int]]:
    """
    Group players into tie blocks.

    Players are visited in (arrival, index) order; a player joins the current
    block when its arrival is within tolerance of the previous member.
    """
    ordered = sorted(range(len(arrivals)), key=lambda j: (arrivals[j], j))
    blocks: List[List[int]] = []
    for j in ordered:
        if blocks and arrivals[j] - arrivals[blocks[-1][-1]] <= tolerance:
            blocks[-1].append(j)
        else:
            blocks.append([j])
    return blocks
