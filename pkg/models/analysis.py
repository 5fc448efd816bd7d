from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.game import TypeProfile
from models.voyage import Voyage


class AnalysisWindow(BaseModel):
    """
    Empirical game instance: observed entries read as types.

    Voyages are kept ordered by (t_entry, vessel_id) so equal entries
    resolve deterministically.
    """

    model_config = ConfigDict(frozen=True)

    voyages: List[Voyage]
    gamma: float = Field(..., description="Calibrated effective service time (hours)")
    t0: Optional[float] = Field(None, description="Completion boundary; defaults to the first entry")
    label: str = ""

    @field_validator("voyages")
    @classmethod
    def sort_voyages(cls, v):
        if not v:
            raise ValueError("analysis window needs at least one voyage")
        return sorted(v, key=lambda voyage: (voyage.t_entry, voyage.vessel_id))

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, v):
        if not v > 0:
            raise ValueError("gamma must be positive")
        return v

    @model_validator(mode="after")
    def default_t0(self):
        if self.t0 is None:
            object.__setattr__(self, "t0", self.voyages[0].t_entry)
        return self

    @property
    def types(self) -> List[float]:
        return [v.t_entry for v in self.voyages]

    @property
    def vessel_ids(self) -> List[str]:
        return [v.vessel_id for v in self.voyages]

    def type_profile(self) -> TypeProfile:
        return TypeProfile.from_types(self.types, self.gamma, self.t0)
