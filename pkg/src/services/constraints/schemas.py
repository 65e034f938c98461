"""Problem, tolerance and penalty schemas."""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.common.exceptions import DomainError
from src.services.constraints.enums import PenaltyScheme, ScheduleKind

if TYPE_CHECKING:
    from src.services.benchmarks.schemas import BenchmarkMetadata

FINAL_TOL_EQ = 1e-4
INEQ_ZERO_FLOOR = 1e-5

ObjectiveFn = Callable[[np.ndarray], np.ndarray]
ConstraintFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Problem:
    """A bound-constrained minimization problem with q + r constraints.

    `objective` and `constraints` accept a position of shape (n,) or a batch
    of shape (..., n). `constraints` returns shape (..., q + r): the q
    inequality values first (satisfied when <= Tol_ineq), then the r
    equality values (satisfied when |g| <= Tol_eq).
    """

    name: str
    lower: np.ndarray
    upper: np.ndarray
    objective: ObjectiveFn
    constraints: ConstraintFn
    n_inequality: int
    n_equality: int
    known_optimum: float
    reference_position: Optional[np.ndarray] = None
    metadata: Optional["BenchmarkMetadata"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1 or lower.size == 0:
            raise DomainError(f"{self.name}: bounds must be two vectors of equal length")
        if np.any(lower >= upper):
            raise DomainError(f"{self.name}: every lower bound must be below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.reference_position is not None:
            ref = np.asarray(self.reference_position, dtype=float)
            if ref.shape != lower.shape:
                raise DomainError(f"{self.name}: reference position has wrong dimension")
            object.__setattr__(self, "reference_position", ref)

    @property
    def n(self) -> int:
        return int(self.lower.size)

    @property
    def m(self) -> int:
        return self.n_inequality + self.n_equality

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass
class EvaluationCounters:
    """FE / CE bookkeeping owned by one run."""

    fe: int = 0
    ce: int = 0
    saturated: int = 0


@dataclass(frozen=True)
class ViolationReport:
    violations: np.ndarray
    bound_violation: float
    raw: np.ndarray

    def penalty_terms(self) -> np.ndarray:
        """Violations with the aggregate bound term appended."""
        return np.append(self.violations, self.bound_violation)

    @property
    def is_zero(self) -> bool:
        return self.bound_violation == 0.0 and not np.any(self.violations > 0.0)


class ToleranceState(BaseModel):
    """Current constraint-violation tolerances and schedule bookkeeping."""

    tol_ineq: float = Field(ge=0.0)
    tol_eq: float = Field(ge=0.0)
    n_updates: int = Field(default=0, ge=0)
    final_tol_eq: float = Field(default=FINAL_TOL_EQ, ge=0.0)
    ineq_zero_floor: float = Field(default=INEQ_ZERO_FLOOR, ge=0.0)
    schedule: ScheduleKind = ScheduleKind.NONE

    # Endgame coefficients, fixed once the endgame window opens
    endgame_ktol_ineq: Optional[float] = None
    endgame_ktol_eq: Optional[float] = None

    @model_validator(mode="after")
    def check_invariants(self) -> "ToleranceState":
        if self.tol_eq < self.final_tol_eq:
            raise ValueError(
                f"tol_eq={self.tol_eq} is below the final equality tolerance {self.final_tol_eq}"
            )
        if 0.0 < self.tol_ineq <= self.ineq_zero_floor:
            self.tol_ineq = 0.0
        return self

    @classmethod
    def final(cls, schedule: ScheduleKind = ScheduleKind.NONE, **kwargs) -> "ToleranceState":
        """Desired tolerances: Tol_ineq = 0, Tol_eq = 1e-4."""
        final_tol_eq = kwargs.pop("final_tol_eq", FINAL_TOL_EQ)
        return cls(
            tol_ineq=0.0,
            tol_eq=final_tol_eq,
            final_tol_eq=final_tol_eq,
            schedule=schedule,
            **kwargs,
        )

    @classmethod
    def zero(cls) -> "ToleranceState":
        """No tolerance at all, equality constraints included."""
        return cls(tol_ineq=0.0, tol_eq=0.0, final_tol_eq=0.0)

    @classmethod
    def fixed(cls, tol_ineq: float, tol_eq: float) -> "ToleranceState":
        """Arbitrary fixed tolerances, as used by offline FR estimation."""
        return cls(tol_ineq=tol_ineq, tol_eq=tol_eq, final_tol_eq=min(tol_eq, FINAL_TOL_EQ))

    def is_final(self) -> bool:
        return self.tol_ineq == 0.0 and self.tol_eq <= self.final_tol_eq

    def same_tolerances(self, other: "ToleranceState") -> bool:
        return self.tol_ineq == other.tol_ineq and self.tol_eq == other.tol_eq


class PenaltyConfig(BaseModel):
    """Penalization scheme and its constant coefficients."""

    model_config = ConfigDict(frozen=True)

    scheme: PenaltyScheme = PenaltyScheme.PROPOSED_CONSTANT
    k: float = Field(default=1e6, gt=0.0)
    alpha_threshold: float = Field(default=1.0, gt=0.0)

    # Static additive scheme
    k_j: Optional[list[float]] = None
    alpha_j: Optional[list[float]] = None
    bound_alpha: float = Field(default=2.0, gt=0.0)

    @model_validator(mode="after")
    def check_lists(self) -> "PenaltyConfig":
        if self.k_j is not None and any(k <= 0.0 for k in self.k_j):
            raise ValueError("every k_j must be positive")
        if self.alpha_j is not None and any(a <= 0.0 for a in self.alpha_j):
            raise ValueError("every alpha_j must be positive")
        if self.k_j is not None and self.alpha_j is not None and len(self.k_j) != len(self.alpha_j):
            raise ValueError("k_j and alpha_j must have the same length")
        return self

    def static_coefficients(self, m: int) -> tuple[list[float], list[float]]:
        """Per-constraint (k_j, alpha_j) for m constraints, defaulting to (k, 2)."""
        k_j = self.k_j if self.k_j is not None else [self.k] * m
        alpha_j = self.alpha_j if self.alpha_j is not None else [2.0] * m
        if len(k_j) != m or len(alpha_j) != m:
            raise DomainError(
                f"static penalty needs {m} coefficients per list, got {len(k_j)} and {len(alpha_j)}"
            )
        return list(k_j), list(alpha_j)
