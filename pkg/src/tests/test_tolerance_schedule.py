"""Tests for tolerance updates and the exponential / pseudo-adaptive schedules."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.common.exceptions import DomainError
from src.services.constraints.enums import ScheduleKind
from src.services.constraints.schemas import ToleranceState
from src.services.tolerance.enums import ToleranceUpdateKind
from src.services.tolerance.schemas import ScheduleConfig
from src.services.tolerance.service import (
    advance_schedule,
    apply_tolerance_update,
    endgame_coefficient,
    endgame_window,
    initial_state,
    pseudo_adaptive_coefficient,
    safety_update_due,
    schedule_step,
)

ADAPTIVE = ScheduleConfig(kind=ScheduleKind.PSEUDO_ADAPTIVE)
EXPONENTIAL = ScheduleConfig(kind=ScheduleKind.EXPONENTIAL)
NONE = ScheduleConfig(kind=ScheduleKind.NONE)


def _state(tol_ineq: float, tol_eq: float, n_updates: int = 0) -> ToleranceState:
    return ToleranceState(tol_ineq=tol_ineq, tol_eq=tol_eq, n_updates=n_updates)


class TestPseudoAdaptiveCoefficient:
    """Test the linear coefficient between per_min and 100%."""

    def test_anchors(self):
        """Test 0.99 at per_min, 0.90 at 100% and 0.945 halfway."""
        assert pseudo_adaptive_coefficient(80.0, ADAPTIVE) == pytest.approx(0.99, abs=1e-12)
        assert pseudo_adaptive_coefficient(100.0, ADAPTIVE) == 0.90
        assert pseudo_adaptive_coefficient(90.0, ADAPTIVE) == pytest.approx(0.945, abs=1e-12)

    def test_within_range_and_linear(self):
        """Test every coefficient lies in [ktol_min, 0.99] on one straight line."""
        pers = np.linspace(80.0, 100.0, 41)
        values = [pseudo_adaptive_coefficient(float(p), ADAPTIVE) for p in pers]

        assert all(0.90 - 1e-12 <= v <= 0.99 + 1e-12 for v in values)
        slopes = np.diff(values) / np.diff(pers)
        assert np.allclose(slopes, slopes[0], rtol=1e-9)

    def test_above_hundred_rejected(self):
        """Test a percentage above 100 is rejected."""
        with pytest.raises(DomainError):
            pseudo_adaptive_coefficient(100.5, ADAPTIVE)

    def test_below_per_min_rejected(self):
        """Test no coefficient is defined below per_min."""
        with pytest.raises(DomainError):
            pseudo_adaptive_coefficient(79.9, ADAPTIVE)


class TestToleranceUpdate:
    """Test a single multiplicative update."""

    def test_halves_both(self):
        """Test ktol = 0.5 halves both tolerances and counts the update."""
        new = apply_tolerance_update(_state(2.0, 1.0, n_updates=3), 0.5)

        assert (new.tol_ineq, new.tol_eq, new.n_updates) == (1.0, 0.5, 4)

    def test_equality_floor(self):
        """Test Tol_eq never drops below 1e-4."""
        new = apply_tolerance_update(_state(1.0, 1.05e-4), 0.9)

        assert new.tol_eq == 1e-4

    def test_inequality_snaps_to_zero(self):
        """Test Tol_ineq snaps to 0 once it reaches 1e-5."""
        state = _state(1.5e-5, 1e-4)
        for _ in range(3):
            state = apply_tolerance_update(state, 0.9)
            assert state.tol_ineq > 1e-5

        state = apply_tolerance_update(state, 0.9)

        assert state.tol_ineq == 0.0

    def test_ktol_out_of_range(self):
        """Test coefficients outside (0, 1] are rejected."""
        with pytest.raises(DomainError):
            apply_tolerance_update(_state(1.0, 1.0), 0.0)
        with pytest.raises(DomainError):
            apply_tolerance_update(_state(1.0, 1.0), 1.5)

    def test_state_rejects_equality_below_final(self):
        """Test a state with Tol_eq under the final value is invalid."""
        with pytest.raises(ValidationError):
            _state(0.0, 1e-5)


class TestSafetyUpdate:
    """Test the rule forcing at least one update per 20 time-steps."""

    def test_due(self):
        """Test t / max(1, n) >= 20 triggers an update."""
        assert safety_update_due(20, 1, ADAPTIVE)
        assert not safety_update_due(19, 1, ADAPTIVE)
        assert safety_update_due(20, 0, ADAPTIVE)
        assert not safety_update_due(19, 0, ADAPTIVE)
        assert safety_update_due(41, 2, ADAPTIVE)

    def test_time_step_must_be_positive(self):
        """Test t < 1 is rejected."""
        with pytest.raises(DomainError):
            safety_update_due(0, 0, ADAPTIVE)


class TestEndgame:
    """Test the window that brings tolerances down to their final values."""

    def test_window(self):
        """Test the window for t_min = 8000 opens after step 7200 and lasts 800 updates."""
        assert endgame_window(8000) == (7200, 800)
        assert endgame_window(3) == (3, 1)

    def test_coefficient(self):
        """Test the coefficient taking 1e-3 to 1e-5 in 800 updates."""
        ktol = endgame_coefficient(1e-3, 1e-5, 8000)

        assert ktol == pytest.approx(0.99426, abs=1e-5)
        assert ktol == pytest.approx(0.01 ** (1 / 800), rel=1e-12)

    def test_already_final(self):
        """Test a tolerance already at its target gets coefficient 1."""
        assert endgame_coefficient(1e-4, 1e-4, 8000) == 1.0
        assert endgame_coefficient(0.0, 1e-5, 8000) == 1.0

    def test_telescopes_to_target(self):
        """Test applying the coefficient over the window reaches the target."""
        tol = 0.5
        ktol = endgame_coefficient(tol, 1e-4, 8000)
        for _ in range(800):
            tol *= ktol

        assert tol == pytest.approx(1e-4, rel=1e-9)


class TestScheduleStep:
    """Test the schedules over whole runs."""

    def test_none_is_constant(self):
        """Test the NONE schedule never changes the tolerances."""
        state = initial_state(NONE)
        for t in range(1, 101):
            new, kind = advance_schedule(state, t, 100, 100.0, NONE)
            assert new.same_tolerances(state)
            assert kind == ToleranceUpdateKind.NONE

    def test_initial_state_holds_only_tolerances(self):
        """Test the run state carries tolerances and counters, while schedule constants stay in ScheduleConfig."""
        state = initial_state(ADAPTIVE)

        assert (state.tol_ineq, state.tol_eq, state.n_updates) == (0.0, 1e-4, 0)
        assert state.schedule == ScheduleKind.PSEUDO_ADAPTIVE
        for name in ("ktol_fixed", "ktol_min", "per_min", "t_min"):
            assert name not in ToleranceState.model_fields
            assert name in ScheduleConfig.model_fields

    def test_exponential_closed_form(self):
        """Test the exponential schedule follows T0 * 0.98^s."""
        state = _state(1000.0, 1e4)
        for s in range(1, 501):
            state = schedule_step(state, s, 10_000, 0.0, EXPONENTIAL)

            assert state.tol_ineq == pytest.approx(1000.0 * 0.98**s, rel=1e-12)
            assert state.tol_eq == pytest.approx(1e4 * 0.98**s, rel=1e-12)

    def test_adaptive_below_per_min_not_due(self):
        """Test nothing happens when few pbests are feasible and no safety update is due."""
        state = _state(50.0, 500.0, n_updates=1)

        new, kind = advance_schedule(state, 5, 1000, 50.0, ADAPTIVE)

        assert new.same_tolerances(state)
        assert kind == ToleranceUpdateKind.NONE

    def test_adaptive_uses_feasible_share(self):
        """Test 100% feasible pbests apply the strongest coefficient."""
        new, kind = advance_schedule(_state(10.0, 10.0), 5, 1000, 100.0, ADAPTIVE)

        assert kind == ToleranceUpdateKind.ADAPTIVE
        assert new.tol_ineq == pytest.approx(9.0)

    def test_safety_fires(self):
        """Test the safety update at t = 20 with no prior update."""
        new, kind = advance_schedule(_state(10.0, 10.0), 20, 1000, 0.0, ADAPTIVE)

        assert kind == ToleranceUpdateKind.SAFETY
        assert new.tol_ineq == pytest.approx(9.9)
        assert new.n_updates == 1

    def test_endgame_has_priority(self):
        """Test inside the endgame window the endgame update wins."""
        _, kind = advance_schedule(_state(10.0, 10.0), 750, 1000, 100.0, ADAPTIVE)

        assert kind == ToleranceUpdateKind.ENDGAME

    def test_pseudo_adaptive_trajectory(self):
        """Test a full run with random feasibility shares keeps every schedule invariant."""
        rng = np.random.default_rng(7)
        t_max = 1000
        t_min = ADAPTIVE.resolve_t_min(t_max)
        state = ToleranceState.model_validate(initial_state(ADAPTIVE).model_dump() | {"tol_ineq": 50.0, "tol_eq": 500.0})
        previous = state

        for t in range(1, t_max + 1):
            state, kind = advance_schedule(state, t, t_max, float(rng.uniform(0, 100)), ADAPTIVE)

            assert state.tol_ineq <= previous.tol_ineq
            assert state.tol_eq <= previous.tol_eq
            assert not 0.0 < state.tol_ineq <= 1e-5
            assert state.tol_eq >= 1e-4
            if 20 <= t <= t_min:
                assert t / state.n_updates < 21
            if t == t_min:
                assert (state.tol_ineq, state.tol_eq) == (0.0, 1e-4)
            if t > t_min:
                assert kind == ToleranceUpdateKind.PINNED
                assert (state.tol_ineq, state.tol_eq) == (0.0, 1e-4)
            previous = state

    def test_resolve_t_min(self):
        """Test t_min defaults to 80% of t_max."""
        assert ADAPTIVE.resolve_t_min(10_000) == 8000
        assert ScheduleConfig(t_min=50).resolve_t_min(10_000) == 50


class TestScheduleConfig:
    """Test schedule configuration validation."""

    def test_window_order(self):
        """Test the low end of the FR window must be below the high end."""
        with pytest.raises(ValidationError):
            ScheduleConfig(target_fr_low=30.0, target_fr_high=25.0)

    def test_ktol_min_below_reference(self):
        """Test ktol_min must stay below 0.99."""
        with pytest.raises(ValidationError):
            ScheduleConfig(ktol_min=0.995)
