from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class BenchmarkMetadata(BaseModel):
    """Reference features of one test problem.

    Feasibility ratios are percentages over 10^6 uniform samples; None
    stands for a ratio reported as below 0.0001%. Mean initial tolerances
    are averages of the self-tuned values over 25 runs, None when the
    problem has no constraint of that kind.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    known_optimum: float
    dimension: int = Field(ge=1)
    n_inequality: int = Field(ge=0)
    n_equality: int = Field(ge=0)
    fr_no_tolerance: Optional[float] = None
    fr_desired_tolerance: Optional[float] = None
    fr_initial_tolerance: Optional[float] = None
    mean_initial_tol_ineq: Optional[float] = None
    mean_initial_tol_eq: Optional[float] = None


class FeasibilityProfile(BaseModel):
    """Estimated feasibility ratios of a problem at three tolerance levels."""

    name: str
    n_samples: int
    fr_no_tolerance: float
    fr_desired_tolerance: float
    fr_given_tolerance: Optional[float] = None
    tol_ineq: Optional[float] = None
    tol_eq: Optional[float] = None
