"""Feasibility-ratio estimation and Latin-hypercube initialization."""

import logging
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from src.common.exceptions import DomainError
from src.core.config import settings
from src.services.benchmarks.schemas import FeasibilityProfile
from src.services.constraints.schemas import EvaluationCounters, Problem, ToleranceState
from src.services.constraints.service import feasible_mask, raw_constraints

logger = logging.getLogger(__name__)


def estimate_feasibility_ratio(
    problem: Problem,
    tol: ToleranceState,
    n_samples: int,
    rng: np.random.Generator,
    counters: Optional[EvaluationCounters] = None,
    chunk_size: Optional[int] = None,
) -> float:
    """
    Percentage of uniform samples in the bounds that are feasible under `tol`.

    Samples are drawn and evaluated in chunks of `chunk_size` rows. Each
    sample costs one CE on `counters` when given; offline estimates pass none.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    chunk = chunk_size or settings.FR_CHUNK_SIZE
    feasible = 0
    remaining = n_samples
    while remaining > 0:
        size = min(chunk, remaining)
        x = problem.lower + problem.span * rng.random((size, problem.n))
        raw = raw_constraints(problem, x).reshape(size, problem.m)
        feasible += int(np.count_nonzero(feasible_mask(problem, raw, x, tol)))
        remaining -= size
    if counters is not None:
        counters.ce += n_samples
    return 100.0 * feasible / n_samples


def feasibility_profile(
    problem: Problem,
    n_samples: int,
    rng: np.random.Generator,
    given: Optional[ToleranceState] = None,
) -> FeasibilityProfile:
    """Feasibility ratios with no tolerance, the desired tolerances and, optionally, `given` ones."""
    fr_none = estimate_feasibility_ratio(problem, ToleranceState.zero(), n_samples, rng)
    fr_desired = estimate_feasibility_ratio(problem, ToleranceState.final(), n_samples, rng)
    fr_given = None
    if given is not None:
        fr_given = estimate_feasibility_ratio(problem, given, n_samples, rng)
    logger.info(
        f"{problem.name}: FR none={fr_none:.4f}% desired={fr_desired:.4f}%"
        + (f" given={fr_given:.4f}%" if fr_given is not None else "")
    )
    return FeasibilityProfile(
        name=problem.name,
        n_samples=n_samples,
        fr_no_tolerance=fr_none,
        fr_desired_tolerance=fr_desired,
        fr_given_tolerance=fr_given,
        tol_ineq=given.tol_ineq if given is not None else None,
        tol_eq=given.tol_eq if given is not None else None,
    )


def latin_hypercube_unit(
    n_particles: int,
    n_dimensions: int,
    n_candidates: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Best of `n_candidates` Latin-hypercube designs in [0, 1)^d by the maximin criterion."""
    if n_particles < 1 or n_dimensions < 1 or n_candidates < 1:
        raise DomainError("n_particles, n_dimensions and n_candidates must be positive")
    strata = np.tile(np.arange(n_particles), (n_candidates, n_dimensions, 1))
    strata = rng.permuted(strata, axis=-1)
    jitter = rng.random((n_candidates, n_particles, n_dimensions))
    designs = (np.swapaxes(strata, 1, 2) + jitter) / n_particles
    if n_particles == 1:
        return designs[0]
    min_distances = np.array([pdist(d).min() for d in designs])
    return designs[int(np.argmax(min_distances))]


def latin_hypercube_init(
    n_particles: int,
    lower: np.ndarray,
    upper: np.ndarray,
    n_candidates: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Initial positions (n_particles, n): the maximin LH design mapped onto the bounds.

    Raises:
        DomainError: If any lower bound is not below its upper bound.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or np.any(lower >= upper):
        raise DomainError("Latin hypercube needs bounds with lower < upper in every dimension")
    unit = latin_hypercube_unit(n_particles, lower.size, n_candidates, rng)
    return lower + (upper - lower) * unit
