"""Self-tuned initial tolerance relaxation.

The search works on one scale variable s: Tol_ineq = s and, when both
constraint kinds are present, Tol_eq = eq_over_ineq_ratio * s (Tol_eq = s
for equality-only problems). Kinds a problem does not have stay at their
final values. Each probe estimates the feasibility ratio over a fresh batch
of uniform samples; s is multiplied by 10 until the ratio reaches the target
window, then bisected in log space.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.common.exceptions import DomainError
from src.services.benchmarks.service import estimate_feasibility_ratio
from src.services.constraints.schemas import Problem, ToleranceState
from src.services.tolerance.schemas import ScheduleConfig, SelfTuningResult
from src.services.tolerance.service import initial_state

logger = logging.getLogger(__name__)


@dataclass
class _Probe:
    scale: Optional[float]
    state: ToleranceState
    fr: float


class _ToleranceSearch:
    def __init__(self, problem: Problem, cfg: ScheduleConfig, rng: np.random.Generator, base: ToleranceState):
        self.problem = problem
        self.cfg = cfg
        self.rng = rng
        self.base = base
        self.probes: list[_Probe] = []

    def tolerances_at(self, scale: float) -> ToleranceState:
        q, r = self.problem.n_inequality, self.problem.n_equality
        tol_ineq = scale if q > 0 else 0.0
        if r == 0:
            tol_eq = self.base.final_tol_eq
        elif q > 0:
            tol_eq = max(self.cfg.eq_over_ineq_ratio * scale, self.base.final_tol_eq)
        else:
            tol_eq = max(scale, self.base.final_tol_eq)
        # Validation snaps tol_ineq below the zero floor
        return ToleranceState.model_validate(
            self.base.model_dump() | {"tol_ineq": tol_ineq, "tol_eq": tol_eq}
        )

    def lower_scale(self) -> float:
        if self.problem.n_inequality == 0:
            return self.base.final_tol_eq
        return self.base.ineq_zero_floor

    def probe(self, scale: Optional[float], state: ToleranceState) -> float:
        fr = estimate_feasibility_ratio(
            self.problem, state, self.cfg.sampling_budget_per_probe, self.rng
        )
        self.probes.append(_Probe(scale=scale, state=state, fr=fr))
        return fr

    @property
    def exhausted(self) -> bool:
        return len(self.probes) >= self.cfg.max_probes


def _target_window(fr_desired: float, cfg: ScheduleConfig) -> tuple[float, float]:
    if fr_desired <= cfg.target_fr_high:
        return cfg.target_fr_low, cfg.target_fr_high
    centre = fr_desired + cfg.fr_bump_percent
    high = min(100.0, centre + cfg.fr_bump_halfwidth)
    low = min(high, centre - cfg.fr_bump_halfwidth)
    return low, high


def self_tune_initial_tolerances(
    problem: Problem,
    cfg: ScheduleConfig,
    rng: np.random.Generator,
) -> SelfTuningResult:
    """
    Search initial tolerances whose sampled feasibility ratio falls in the target window.

    The first probe is taken at the desired tolerances (0, 1e-4). When it is
    already above target_fr_high, the window moves to that ratio plus
    fr_bump_percent (capped at 100); a window clamped to [100, 100] keeps the
    desired tolerances without further sampling. An unreachable window never aborts the
    run: the probe nearest to the window is returned with converged=False.

    Raises:
        DomainError: If the problem has no constraints.
    """
    if problem.m == 0:
        raise DomainError(f"{problem.name}: self-tuning needs at least one constraint")

    base = initial_state(cfg)
    search = _ToleranceSearch(problem, cfg, rng, base)
    fr_desired = search.probe(None, base)
    low, high = _target_window(fr_desired, cfg)

    def in_window(fr: float) -> bool:
        return low <= fr <= high

    def distance(fr: float) -> float:
        return max(low - fr, fr - high, 0.0)

    def finish(probe: _Probe, converged: bool) -> SelfTuningResult:
        if not converged:
            logger.warning(
                f"{problem.name}: self-tuning did not reach FR window [{low:.2f}, {high:.2f}] "
                f"in {len(search.probes)} probes; using FR={probe.fr:.2f} "
                f"(tol_ineq={probe.state.tol_ineq:.6g}, tol_eq={probe.state.tol_eq:.6g})"
            )
        return SelfTuningResult(
            state=probe.state,
            achieved_fr=probe.fr,
            fr_desired=fr_desired,
            target_fr_low=low,
            target_fr_high=high,
            n_probes=len(search.probes),
            ce_count=len(search.probes) * cfg.sampling_budget_per_probe,
            converged=converged,
        )

    if low >= 100.0 and fr_desired > cfg.target_fr_high:
        # Window clamped to [100, 100]
        logger.info(
            f"{problem.name}: FR window saturated at 100% (FR={fr_desired:.4f} at the desired tolerances); "
            f"keeping the desired tolerances"
        )
        return finish(search.probes[0], True)

    if in_window(fr_desired):
        return finish(search.probes[0], True)

    # Expansion: grow the scale tenfold until the ratio reaches the window
    lo_scale = search.lower_scale()
    hi_scale: Optional[float] = None
    scale = cfg.initial_scale
    for _ in range(cfg.max_expansions):
        if search.exhausted:
            break
        state = search.tolerances_at(scale)
        if state.same_tolerances(base):
            fr = fr_desired
        else:
            fr = search.probe(scale, state)
            if in_window(fr):
                return finish(search.probes[-1], True)
        if fr > high:
            hi_scale = scale
            break
        lo_scale = scale
        scale *= 10.0

    # Bisection in log space
    if hi_scale is not None:
        while not search.exhausted:
            mid = math.sqrt(lo_scale * hi_scale)
            fr = search.probe(mid, search.tolerances_at(mid))
            if in_window(fr):
                return finish(search.probes[-1], True)
            if fr < low:
                lo_scale = mid
            else:
                hi_scale = mid

    nearest = min(search.probes, key=lambda p: distance(p.fr))
    return finish(nearest, False)
