from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.services.constraints.enums import ScheduleKind
from src.services.constraints.schemas import ToleranceState
from src.services.tolerance.enums import ToleranceUpdateKind


class ScheduleConfig(BaseModel):
    """Tolerance decrease schedule and self-tuning parameters."""

    model_config = ConfigDict(frozen=True)

    kind: ScheduleKind = ScheduleKind.PSEUDO_ADAPTIVE

    # Decrease schedule
    ktol_fixed: float = Field(default=0.98, gt=0.0, lt=1.0)
    ktol_min: float = Field(default=0.90, gt=0.0, lt=0.99)
    per_min: float = Field(default=80.0, gt=0.0, lt=100.0)
    t_min: Optional[int] = Field(default=None, ge=1)
    t_min_fraction: float = Field(default=0.80, gt=0.0, lt=1.0)
    safety_ratio: float = Field(default=20.0, gt=0.0)
    safety_ktol: float = Field(default=0.99, gt=0.0, lt=1.0)

    # Self-tuned initial relaxation
    target_fr_low: float = Field(default=20.0, ge=0.0, le=100.0)
    target_fr_high: float = Field(default=25.0, ge=0.0, le=100.0)
    fr_bump_percent: float = Field(default=5.0, ge=0.0)
    fr_bump_halfwidth: float = Field(default=1.0, ge=0.0)
    eq_over_ineq_ratio: float = Field(default=10.0, gt=0.0)
    sampling_budget_per_probe: int = Field(default=1000, ge=1)
    initial_scale: float = Field(default=1e-4, gt=0.0)
    max_expansions: int = Field(default=30, ge=1)
    max_probes: int = Field(default=40, ge=2)

    @model_validator(mode="after")
    def check_window(self) -> "ScheduleConfig":
        if self.target_fr_low >= self.target_fr_high:
            raise ValueError(
                f"target_fr_low ({self.target_fr_low}) must be below target_fr_high ({self.target_fr_high})"
            )
        return self

    def resolve_t_min(self, t_max: int) -> int:
        """Explicit t_min, or round(t_min_fraction * t_max)."""
        if self.t_min is not None:
            return self.t_min
        return max(1, int(self.t_min_fraction * t_max + 0.5))


class SelfTuningResult(BaseModel):
    """Outcome of the initial tolerance search of one run."""

    state: ToleranceState
    achieved_fr: float
    fr_desired: float
    target_fr_low: float
    target_fr_high: float
    n_probes: int
    ce_count: int
    converged: bool


class ToleranceTraceRecord(BaseModel):
    t: int
    tol_ineq: float
    tol_eq: float
    percent_feasible_pbests: float
    update_kind: ToleranceUpdateKind
