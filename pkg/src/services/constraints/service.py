"""Tolerance-aware constraint violations and the two penalization schemes."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.common.exceptions import DomainError, EvaluationError
from src.services.constraints.enums import PenaltyScheme
from src.services.constraints.schemas import (
    EvaluationCounters,
    PenaltyConfig,
    Problem,
    ToleranceState,
    ViolationReport,
)

logger = logging.getLogger(__name__)

SATURATION_SENTINEL = 1e300


def raw_constraints(problem: Problem, x: np.ndarray) -> np.ndarray:
    """Raw g_j values at x (shape (m,)) or at a batch (shape (B, m)), checked for finiteness."""
    raw = np.asarray(problem.constraints(x), dtype=float)
    if not np.all(np.isfinite(raw)):
        bad = np.argwhere(~np.isfinite(raw))[0]
        j = int(bad[-1])
        row = None if raw.ndim == 1 else int(bad[0])
        point = x if row is None else x[row]
        raise EvaluationError(
            f"{problem.name}: constraint {j + 1} is not finite at x={np.array2string(np.asarray(point))}",
            x=point,
            constraint_index=j,
            particle_index=row,
        )
    return raw


def bound_violation(problem: Problem, x: np.ndarray) -> np.ndarray | float:
    """Sum_i max(0, x_i - u_i) + max(0, l_i - x_i); a batch gives one value per row."""
    excess = np.maximum(0.0, x - problem.upper) + np.maximum(0.0, problem.lower - x)
    total = np.sum(excess, axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def violations_from_raw(problem: Problem, raw: np.ndarray, tol: ToleranceState) -> np.ndarray:
    """Tolerance-adjusted violations from cached raw constraint values (no CE)."""
    q = problem.n_inequality
    ineq = np.maximum(0.0, raw[..., :q] - tol.tol_ineq)
    eq = np.maximum(0.0, np.abs(raw[..., q:]) - tol.tol_eq)
    return np.concatenate([ineq, eq], axis=-1)


def violation_vector(
    problem: Problem,
    x: np.ndarray,
    tol: ToleranceState,
    counters: Optional[EvaluationCounters] = None,
) -> ViolationReport:
    """Evaluate the constraint set once at x (one CE) and report its violations."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise DomainError(f"{problem.name}: expected a position of length {problem.n}, got {x.shape}")
    raw = raw_constraints(problem, x)
    if counters is not None:
        counters.ce += 1
    return ViolationReport(
        violations=violations_from_raw(problem, raw, tol),
        bound_violation=float(bound_violation(problem, x)),
        raw=raw,
    )


def is_feasible(problem: Problem, raw_g: np.ndarray, x: np.ndarray, tol: ToleranceState) -> bool:
    if bound_violation(problem, x) > 0.0:
        return False
    return not np.any(violations_from_raw(problem, raw_g, tol) > 0.0)


def feasible_mask(problem: Problem, raw: np.ndarray, x: np.ndarray, tol: ToleranceState) -> np.ndarray:
    """Row-wise feasibility of a batch given its cached raw constraint values."""
    inside = bound_violation(problem, x) == 0.0
    if problem.m == 0:
        return np.asarray(inside)
    satisfied = np.all(violations_from_raw(problem, raw, tol) == 0.0, axis=-1)
    return np.logical_and(inside, satisfied)


def _power(v: float, alpha: float) -> float:
    if alpha == 1.0:
        return v
    if alpha == 2.0:
        return v * v
    try:
        return math.pow(v, alpha)
    except OverflowError:
        return math.inf


def _saturate(value: float, counters: Optional[EvaluationCounters]) -> float:
    if math.isfinite(value) and value < SATURATION_SENTINEL:
        return value
    if counters is not None:
        counters.saturated += 1
    return SATURATION_SENTINEL


def penalized_conflict_proposed(
    f_value: float,
    violations: np.ndarray,
    cfg: PenaltyConfig,
    counters: Optional[EvaluationCounters] = None,
) -> float:
    """f + k * sum_j v_j^alpha_j, alpha_j = 2 when v_j >= threshold else 1.

    `violations` are tolerance-adjusted and include the bound term. The raw
    conflict is returned untouched when nothing is violated.
    """
    values = [v for v in np.asarray(violations, dtype=float).tolist() if v > 0.0]
    if not values:
        return f_value if math.isfinite(f_value) else _saturate(f_value, counters)
    terms = [v * v if v >= cfg.alpha_threshold else v for v in values]
    try:
        penalty = cfg.k * math.fsum(terms)
    except OverflowError:
        penalty = math.inf
    return _saturate(f_value + penalty, counters)


def penalized_conflict_static(
    f_value: float,
    violations: np.ndarray,
    cfg: PenaltyConfig,
    counters: Optional[EvaluationCounters] = None,
) -> float:
    """f + sum_j k_j * v_j^alpha_j over zero-tolerance violations.

    A vector one longer than the coefficient lists carries the bound term
    last; it is weighted with (k, bound_alpha).
    """
    values = np.asarray(violations, dtype=float).tolist()
    m = len(cfg.k_j) if cfg.k_j is not None else (len(cfg.alpha_j) if cfg.alpha_j is not None else None)
    if m is None:
        m = len(values)
    elif len(values) == m + 1:
        pass
    elif len(values) != m:
        raise DomainError(f"expected {m} or {m + 1} violations, got {len(values)}")
    k_j, alpha_j = cfg.static_coefficients(m)
    weights = list(zip(k_j, alpha_j)) + [(cfg.k, cfg.bound_alpha)]
    terms = [k * _power(v, a) for v, (k, a) in zip(values, weights) if v > 0.0]
    if not terms:
        return f_value if math.isfinite(f_value) else _saturate(f_value, counters)
    try:
        penalty = math.fsum(terms)
    except (OverflowError, ValueError):
        penalty = math.inf
    return _saturate(f_value + penalty, counters)


@dataclass(frozen=True)
class BatchEvaluation:
    conflict: np.ndarray
    raw: np.ndarray
    penalized: np.ndarray
    feasible: np.ndarray


class PenalizedEvaluator:
    """Penalized-conflict function of one run, with its FE/CE counters."""

    def __init__(
        self,
        problem: Problem,
        penalty: PenaltyConfig,
        counters: Optional[EvaluationCounters] = None,
    ):
        self.problem = problem
        self.penalty = penalty
        self.counters = counters if counters is not None else EvaluationCounters()
        if penalty.scheme == PenaltyScheme.STATIC_ADDITIVE:
            penalty.static_coefficients(problem.m)
        self._zero_tol = ToleranceState.zero()

    def penalize(self, f_value: float, raw: np.ndarray, x: np.ndarray, tol: ToleranceState) -> float:
        """Penalized conflict from cached values; counts no evaluations."""
        if self.penalty.scheme == PenaltyScheme.STATIC_ADDITIVE:
            terms = np.append(
                violations_from_raw(self.problem, raw, self._zero_tol), bound_violation(self.problem, x)
            )
            return penalized_conflict_static(f_value, terms, self.penalty, self.counters)
        terms = np.append(violations_from_raw(self.problem, raw, tol), bound_violation(self.problem, x))
        return penalized_conflict_proposed(f_value, terms, self.penalty, self.counters)

    def evaluate(self, x: np.ndarray, tol: ToleranceState) -> tuple[float, np.ndarray, float]:
        """(raw conflict, raw constraints, penalized conflict) at x: one FE and one CE."""
        batch = self.evaluate_batch(np.asarray(x, dtype=float)[np.newaxis, :], tol)
        return float(batch.conflict[0]), batch.raw[0], float(batch.penalized[0])

    def evaluate_batch(
        self,
        positions: np.ndarray,
        tol: ToleranceState,
        particle_ids: Optional[Sequence[int]] = None,
    ) -> BatchEvaluation:
        """Evaluate every row of `positions`: one FE and one CE per row.

        Errors name the offending row, or its entry in `particle_ids` when given.
        """
        positions = np.asarray(positions, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            conflict = np.asarray(self.problem.objective(positions), dtype=float).reshape(len(positions))
            try:
                raw = raw_constraints(self.problem, positions).reshape(len(positions), self.problem.m)
            except EvaluationError as e:
                row = e.particle_index or 0
                raise e.with_particle(particle_ids[row] if particle_ids is not None else row) from e
        if np.any(np.isnan(conflict)):
            row = int(np.argmax(np.isnan(conflict)))
            raise EvaluationError(
                f"{self.problem.name}: objective is NaN", x=positions[row]
            ).with_particle(particle_ids[row] if particle_ids is not None else row)
        self.counters.fe += len(positions)
        self.counters.ce += len(positions)

        penalized = np.array(
            [
                self.penalize(float(f), raw[i], positions[i], tol)
                for i, f in enumerate(conflict.tolist())
            ]
        )
        return BatchEvaluation(
            conflict=conflict,
            raw=raw,
            penalized=penalized,
            feasible=feasible_mask(self.problem, raw, positions, tol),
        )

