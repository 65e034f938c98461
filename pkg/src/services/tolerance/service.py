"""Tolerance decrease schedules: exponential, pseudo-adaptive, safety and endgame updates."""

import math

from src.common.exceptions import DomainError
from src.services.constraints.enums import ScheduleKind
from src.services.constraints.schemas import ToleranceState
from src.services.tolerance.enums import ToleranceUpdateKind
from src.services.tolerance.schemas import ScheduleConfig

KTOL_AT_PER_MIN = 0.99


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def endgame_window(t_min: int) -> tuple[int, int]:
    """(last step before the endgame, number of endgame updates)."""
    return _round_half_up(0.9 * t_min), max(1, _round_half_up(0.1 * t_min))


def initial_state(cfg: ScheduleConfig) -> ToleranceState:
    """Final tolerances (0, 1e-4) tagged with the schedule kind of `cfg`."""
    return ToleranceState.final(schedule=cfg.kind)


def pseudo_adaptive_coefficient(per: float, cfg: ScheduleConfig) -> float:
    """
    Linear coefficient between (per_min, 0.99) and (100, ktol_min).

    Args:
        per: Percentage of feasible pbests under the current tolerances.
        cfg: Schedule configuration holding ktol_min and per_min.

    Raises:
        DomainError: If per is above 100 or below per_min.
    """
    if per > 100.0:
        raise DomainError(f"percentage of feasible pbests must be <= 100, got {per}")
    if per < cfg.per_min:
        raise DomainError(f"no pseudo-adaptive update below per_min={cfg.per_min}, got {per}")
    slope = (KTOL_AT_PER_MIN - cfg.ktol_min) / (100.0 - cfg.per_min)
    return slope * (100.0 - per) + cfg.ktol_min


def apply_tolerance_update(state: ToleranceState, ktol: float) -> ToleranceState:
    """Multiply both tolerances by ktol, applying the equality floor and the inequality snap."""
    if not 0.0 < ktol <= 1.0:
        raise DomainError(f"ktol must lie in (0, 1], got {ktol}")
    tol_ineq = ktol * state.tol_ineq
    if tol_ineq <= state.ineq_zero_floor:
        tol_ineq = 0.0
    tol_eq = max(ktol * state.tol_eq, state.final_tol_eq)
    return state.model_copy(
        update={"tol_ineq": tol_ineq, "tol_eq": tol_eq, "n_updates": state.n_updates + 1}
    )


def safety_update_due(t: int, n_updates: int, cfg: ScheduleConfig) -> bool:
    if t < 1:
        raise DomainError(f"time-step must be >= 1, got {t}")
    return t / max(1, n_updates) >= cfg.safety_ratio


def endgame_coefficient(tol_at_09tmin: float, tol_final: float, t_min: int) -> float:
    """Constant coefficient taking tol_at_09tmin to tol_final in round(0.1*t_min) updates."""
    if tol_at_09tmin <= tol_final:
        return 1.0
    _, steps = endgame_window(t_min)
    return (tol_final / tol_at_09tmin) ** (1.0 / steps)


def _pinned(state: ToleranceState) -> ToleranceState:
    return state.model_copy(update={"tol_ineq": 0.0, "tol_eq": state.final_tol_eq})


def _apply_endgame(state: ToleranceState, t: int, t_min: int) -> ToleranceState:
    if state.endgame_ktol_ineq is None or state.endgame_ktol_eq is None:
        state = state.model_copy(
            update={
                "endgame_ktol_ineq": endgame_coefficient(state.tol_ineq, state.ineq_zero_floor, t_min),
                "endgame_ktol_eq": endgame_coefficient(state.tol_eq, state.final_tol_eq, t_min),
            }
        )
    assert state.endgame_ktol_ineq is not None and state.endgame_ktol_eq is not None
    if t == t_min:
        return _pinned(state).model_copy(update={"n_updates": state.n_updates + 1})

    tol_ineq = state.endgame_ktol_ineq * state.tol_ineq
    if tol_ineq <= state.ineq_zero_floor:
        tol_ineq = 0.0
    tol_eq = max(state.endgame_ktol_eq * state.tol_eq, state.final_tol_eq)
    return state.model_copy(
        update={"tol_ineq": tol_ineq, "tol_eq": tol_eq, "n_updates": state.n_updates + 1}
    )


def advance_schedule(
    state: ToleranceState,
    t: int,
    t_max: int,
    per_feasible_pbests: float,
    cfg: ScheduleConfig,
) -> tuple[ToleranceState, ToleranceUpdateKind]:
    """One schedule step, also reporting which update fired."""
    if cfg.kind == ScheduleKind.NONE:
        return state, ToleranceUpdateKind.NONE

    if cfg.kind == ScheduleKind.EXPONENTIAL:
        return apply_tolerance_update(state, cfg.ktol_fixed), ToleranceUpdateKind.EXPONENTIAL

    t_min = cfg.resolve_t_min(t_max)
    if t > t_min:
        return _pinned(state), ToleranceUpdateKind.PINNED

    window_start, _ = endgame_window(t_min)
    if t > window_start and (not state.is_final() or t == t_min):
        return _apply_endgame(state, t, t_min), ToleranceUpdateKind.ENDGAME

    if per_feasible_pbests >= cfg.per_min:
        ktol = pseudo_adaptive_coefficient(per_feasible_pbests, cfg)
        return apply_tolerance_update(state, ktol), ToleranceUpdateKind.ADAPTIVE

    if safety_update_due(t, state.n_updates, cfg):
        return apply_tolerance_update(state, cfg.safety_ktol), ToleranceUpdateKind.SAFETY

    return state, ToleranceUpdateKind.NONE


def schedule_step(
    state: ToleranceState,
    t: int,
    t_max: int,
    per_feasible_pbests: float,
    cfg: ScheduleConfig,
) -> ToleranceState:
    new_state, _ = advance_schedule(state, t, t_max, per_feasible_pbests, cfg)
    return new_state
