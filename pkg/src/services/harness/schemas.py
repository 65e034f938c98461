from typing import Optional

import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.config import settings
from src.services.benchmarks.repository import PROBLEM_NAMES
from src.services.constraints.enums import PenaltyScheme, ScheduleKind
from src.services.constraints.schemas import PenaltyConfig
from src.services.swarm.coefficients import DEFAULT_SUBGROUP_SPECS
from src.services.swarm.schemas import CoefficientSpec
from src.services.tolerance.schemas import ScheduleConfig

TRACE_COLUMNS = [
    "t",
    "tol_ineq",
    "tol_eq",
    "percent_feasible_pbests",
    "best_feasible_conflict",
    "mean_pbest_conflict",
    "swarm_best_conflict",
    "update_kind",
]

SUMMARY_COLUMNS = [
    "Problem",
    "Optimum",
    "Type of tolerance relaxation",
    "BEST",
    "MEDIAN",
    "MEAN",
    "WORST",
    "[%] Feasible Solutions",
    "[%] Successful Solutions",
    "Mean FEs",
    "Mean CEs",
    "Mean [%] Feasible PBESTs",
]


class ExperimentConfig(BaseModel):
    """One problem under one schedule, repeated n_runs times."""

    problem: str
    n_particles: int = Field(default=50, ge=1)
    t_max: int = Field(default=10000, ge=1)
    n_runs: int = Field(default=25, ge=1)
    schedule: ScheduleConfig = ScheduleConfig()
    penalty: PenaltyConfig = PenaltyConfig()
    subgroups: list[CoefficientSpec] = Field(default_factory=lambda: list(DEFAULT_SUBGROUP_SPECS))
    links_per_particle: int = Field(default=2, ge=1)
    # Share of t_max after which every particle is informed by the whole swarm; None keeps the ring fixed
    neighbourhood_full_fraction: Optional[float] = Field(default=0.5, gt=0.0, le=1.0)
    lh_candidates: int = Field(default=1000, ge=1)
    base_seed: int = settings.BASE_SEED
    output_dir: str = settings.OUTPUT_DIR
    success_threshold: float = Field(default=1e-4, ge=0.0)
    record_traces: bool = True

    @field_validator("problem")
    @classmethod
    def known_problem(cls, v: str) -> str:
        name = v.strip().lower()
        if name not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem '{v}', valid names: {', '.join(PROBLEM_NAMES)}")
        return name

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        if not self.subgroups:
            raise ValueError("at least one sub-neighbourhood is required")
        if len(self.subgroups) > self.n_particles:
            raise ValueError(
                f"{len(self.subgroups)} sub-neighbourhoods cannot be formed from {self.n_particles} particles"
            )
        if self.penalty.scheme == PenaltyScheme.STATIC_ADDITIVE and self.schedule.kind != ScheduleKind.NONE:
            raise ValueError("the static penalty scheme runs with zero tolerances; use schedule 'none'")
        if self.schedule.kind == ScheduleKind.PSEUDO_ADAPTIVE:
            t_min = self.schedule.resolve_t_min(self.t_max)
            if t_min >= self.t_max:
                raise ValueError(f"t_min ({t_min}) must be below t_max ({self.t_max})")
        return self

    @property
    def n_subgroups(self) -> int:
        return len(self.subgroups)

    @property
    def neighbourhood_full_step(self) -> Optional[int]:
        if self.neighbourhood_full_fraction is None:
            return None
        return max(1, round(self.neighbourhood_full_fraction * self.t_max))

    @property
    def schedule_kind(self) -> ScheduleKind:
        return self.schedule.kind

    @property
    def label(self) -> str:
        return f"{self.problem}_{self.schedule.kind.value}"


class RunTrace(BaseModel):
    """Per-step records of one run, stored column-wise."""

    t: list[int] = []
    tol_ineq: list[float] = []
    tol_eq: list[float] = []
    percent_feasible_pbests: list[float] = []
    best_feasible_conflict: list[float] = []
    mean_pbest_conflict: list[float] = []
    swarm_best_conflict: list[float] = []
    update_kind: list[str] = []

    def __len__(self) -> int:
        return len(self.t)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({column: getattr(self, column) for column in TRACE_COLUMNS})


class RunResult(BaseModel):
    problem: str
    schedule: ScheduleKind
    run_index: int
    seed: int
    found_feasible: bool
    best_conflict: Optional[float] = None
    best_position: Optional[list[float]] = None
    error: Optional[float] = None
    success: bool
    fe: int
    ce: int
    saturated: int = 0
    percent_feasible_pbests: float
    initial_tol_ineq: float
    initial_tol_eq: float
    tuning_fr: Optional[float] = None
    tuning_probes: int = 0
    tuning_converged: Optional[bool] = None
    trace: Optional[RunTrace] = None


class RunFailure(BaseModel):
    """A run aborted by an error; the suite goes on without it."""

    problem: str
    schedule: ScheduleKind
    run_index: int
    seed: int
    error_type: str
    message: str


class StatisticsRow(BaseModel):
    problem: str
    optimum: float
    schedule: ScheduleKind
    best: Optional[float] = None
    median: Optional[float] = None
    mean: Optional[float] = None
    worst: Optional[float] = None
    percent_feasible: float
    percent_successful: float
    mean_fe: float
    mean_ce: float
    mean_percent_feasible_pbests: float
    n_runs: int
    n_failed: int = 0
    mean_initial_tol_ineq: Optional[float] = None
    mean_initial_tol_eq: Optional[float] = None
    mean_tuning_fr: Optional[float] = None


class SuiteStatistics(BaseModel):
    rows: list[StatisticsRow] = []


class ExperimentOutcome(BaseModel):
    """Everything one configuration produced: its runs, failures and statistics row."""

    config: ExperimentConfig
    results: list[RunResult]
    failures: list[RunFailure] = []
    statistics: StatisticsRow


class SuiteReport(BaseModel):
    outcomes: list[ExperimentOutcome]

    @property
    def statistics(self) -> SuiteStatistics:
        return SuiteStatistics(rows=[o.statistics for o in self.outcomes])
