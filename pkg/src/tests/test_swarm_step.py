"""Tests for the velocity/position updates and the synchronous swarm step."""

import copy

import numpy as np
import pytest

from src.common.exceptions import DomainError, EvaluationError
from src.services.constraints.schemas import PenaltyConfig, ToleranceState
from src.services.constraints.service import PenalizedEvaluator
from src.services.swarm.coefficients import (
    DEFAULT_SUBGROUP_SPECS,
    classical_coefficients,
    coefficients_from_spec,
    rrr1_coefficients,
    rrr2_coefficients,
)
from src.services.swarm.schemas import Particle
from src.services.swarm.service import (
    compute_lbest,
    initialize_swarm,
    percent_feasible_pbests,
    position_update,
    repenalize,
    step_swarm,
    swarm_best,
    velocity_update,
)
from src.services.swarm.topology import build_forward_topology


def _particle(position, velocity=None, pbest=None) -> Particle:
    x = np.asarray(position, dtype=float)
    return Particle(
        position=x,
        velocity=np.zeros_like(x) if velocity is None else np.asarray(velocity, dtype=float),
        pbest_position=x.copy() if pbest is None else np.asarray(pbest, dtype=float),
        pbest_conflict=0.0,
        pbest_raw_constraints=np.zeros(1),
        pbest_penalized=0.0,
        pbest_feasible=True,
    )


class TestVelocityUpdate:
    """Test the per-particle velocity rule."""

    def test_pure_inertia_at_best(self):
        """Test v' = w * v when the particle sits on its pbest and lbest."""
        coeffs = rrr1_coefficients(1.80)
        p = _particle([1.0, -2.0, 3.0], velocity=[0.5, 0.25, -1.0])

        v = velocity_update(p, p.position.copy(), coeffs, np.random.default_rng(0))

        assert np.array_equal(v, coeffs.w * p.velocity)

    def test_individual_strength_within_interval(self):
        """Test the drawn individual strength lies in [ip * phi_min, ip * phi_max]."""
        coeffs = rrr2_coefficients(2.40)
        n = 100_000
        p = _particle(np.zeros(n), pbest=np.ones(n))

        phi_i = velocity_update(p, np.zeros(n), coeffs, np.random.default_rng(1))

        assert phi_i.min() >= coeffs.ip * coeffs.phi_min
        assert phi_i.max() <= coeffs.ip * coeffs.phi_max * (1.0 + 1e-12)
        assert phi_i.mean() == pytest.approx(coeffs.ip * coeffs.aw, abs=0.01)

    def test_same_seed_same_velocity(self):
        """Test the update is reproducible from the generator state."""
        coeffs = classical_coefficients(0.7298, 1.4961, 1.4961)
        p = _particle([0.0, 0.0], velocity=[1.0, 1.0], pbest=[2.0, -1.0])
        lbest = np.array([-3.0, 4.0])

        v1 = velocity_update(p, lbest, coeffs, np.random.default_rng(42))
        v2 = velocity_update(p, lbest, coeffs, np.random.default_rng(42))

        assert np.array_equal(v1, v2)

    def test_dimension_mismatch(self):
        """Test an lbest of the wrong length is rejected."""
        p = _particle([0.0, 0.0])

        with pytest.raises(DomainError):
            velocity_update(p, np.zeros(3), rrr1_coefficients(1.8), np.random.default_rng(0))


class TestPositionUpdate:
    """Test the position rule."""

    def test_zero_velocity(self):
        """Test a zero velocity leaves the position unchanged."""
        assert np.array_equal(position_update(np.array([1.0, 2.0]), np.zeros(2)), [1.0, 2.0])

    def test_adds_velocity(self):
        """Test x' = x + v with no clamping."""
        assert np.array_equal(position_update(np.array([1.0, 2.0]), np.array([-1.0, 3.0])), [0.0, 5.0])

    def test_shape_mismatch(self):
        """Test mismatched shapes are rejected."""
        with pytest.raises(DomainError):
            position_update(np.zeros(2), np.zeros(3))


class TestSwarmStep:
    """Test the synchronous time-step."""

    def _swarm(self, problem, positions, tol=None):
        evaluator = PenalizedEvaluator(problem, PenaltyConfig())
        tol = tol or ToleranceState.final()
        particles, _ = initialize_swarm(np.asarray(positions, dtype=float), evaluator, tol)
        return particles, evaluator, tol

    def test_stationary_particle(self, toy_problem):
        """Test a single particle with zero weights stays put and keeps its pbest."""
        particles, evaluator, tol = self._swarm(toy_problem, [[1.0, 2.0]])
        topology = build_forward_topology(1, n_subgroups=1)
        before = particles[0].pbest_penalized

        step_swarm(particles, topology, evaluator, tol, np.random.default_rng(0), [classical_coefficients(0, 0, 0)])

        assert np.array_equal(particles[0].position, [1.0, 2.0])
        assert np.array_equal(particles[0].pbest_position, [1.0, 2.0])
        assert particles[0].pbest_penalized == before
        assert evaluator.counters.fe == 2

    def test_worse_move_keeps_pbest(self, toy_problem):
        """Test the pbest survives a move to a worse point."""
        particles, evaluator, tol = self._swarm(toy_problem, [[1.0, 2.0]])
        particles[0].velocity = np.array([1.0, 1.0])
        topology = build_forward_topology(1, n_subgroups=1)

        step_swarm(particles, topology, evaluator, tol, np.random.default_rng(0), [classical_coefficients(1, 0, 0)])

        assert np.array_equal(particles[0].position, [2.0, 3.0])
        assert np.array_equal(particles[0].pbest_position, [1.0, 2.0])
        assert particles[0].pbest_feasible is False

    def test_better_move_replaces_pbest(self, toy_problem):
        """Test a strictly better point becomes the pbest with its cached values."""
        particles, evaluator, tol = self._swarm(toy_problem, [[1.0, 2.0]])
        particles[0].velocity = np.array([-1.0, -2.0])
        topology = build_forward_topology(1, n_subgroups=1)

        step_swarm(particles, topology, evaluator, tol, np.random.default_rng(0), [classical_coefficients(1, 0, 0)])

        p = particles[0]
        assert np.array_equal(p.pbest_position, [0.0, 0.0])
        assert p.pbest_conflict == 0.0
        assert p.pbest_penalized == 0.0
        assert np.array_equal(p.pbest_raw_constraints, [0.0, 0.0])
        assert p.pbest_feasible is True

    def test_evaluation_order_does_not_matter(self, toy_problem):
        """Test pbests and lbests are identical for any evaluation order."""
        positions = np.random.default_rng(3).uniform(-5, 5, size=(6, 2))
        particles, evaluator, tol = self._swarm(toy_problem, positions)
        twins = copy.deepcopy(particles)
        topology = build_forward_topology(6)
        sets = [coefficients_from_spec(s) for s in DEFAULT_SUBGROUP_SPECS]

        a = step_swarm(particles, topology, evaluator, tol, np.random.default_rng(9), sets)
        b = step_swarm(twins, topology, evaluator, tol, np.random.default_rng(9), sets, order=[5, 4, 3, 2, 1, 0])

        assert a.lbest == b.lbest
        for p, q in zip(particles, twins):
            assert np.array_equal(p.pbest_position, q.pbest_position)
            assert p.pbest_penalized == q.pbest_penalized
        assert np.array_equal(a.positions, b.positions)

    def test_bad_order_rejected(self, toy_problem):
        """Test an order that is not a permutation is rejected."""
        particles, evaluator, tol = self._swarm(toy_problem, [[0.0, 0.0], [1.0, 1.0]])
        topology = build_forward_topology(2, n_subgroups=1)

        with pytest.raises(DomainError):
            step_swarm(
                particles, topology, evaluator, tol, np.random.default_rng(0),
                [classical_coefficients(0, 0, 0)], order=[0, 0],
            )

    def test_evaluation_counts(self, toy_problem):
        """Test N particles over T time-steps cost N * T FEs and CEs."""
        positions = np.random.default_rng(4).uniform(-5, 5, size=(5, 2))
        particles, evaluator, tol = self._swarm(toy_problem, positions)
        topology = build_forward_topology(5)
        sets = [coefficients_from_spec(s) for s in DEFAULT_SUBGROUP_SPECS]
        rng = np.random.default_rng(5)

        for _ in range(9):
            step_swarm(particles, topology, evaluator, tol, rng, sets)

        assert evaluator.counters.fe == 50
        assert evaluator.counters.ce == 50

    def test_error_names_particle(self, unstable_problem):
        """Test a non-finite constraint reports the particle that produced it."""
        particles, evaluator, tol = self._swarm(unstable_problem, [[0.0, 0.0], [-1.0, 0.0], [1.0, 1.0]])
        particles[1].velocity = np.array([10.0, 0.0])
        topology = build_forward_topology(3, n_subgroups=1)

        with pytest.raises(EvaluationError) as exc_info:
            step_swarm(
                particles, topology, evaluator, tol, np.random.default_rng(0),
                [classical_coefficients(1, 0, 0)], order=[1, 2, 0],
            )

        assert exc_info.value.particle_index == 1
        assert exc_info.value.constraint_index == 0
        assert "particle 1" in str(exc_info.value)


class TestSwarmQueries:
    """Test lbest selection, feasibility percentage and re-penalization."""

    def test_lbest_ties_go_to_lowest_index(self, toy_problem):
        """Test equal pbest penalties resolve to the lowest particle index."""
        particles = [_particle([0.0, 0.0]) for _ in range(4)]
        topology = build_forward_topology(4, n_subgroups=1)

        assert compute_lbest(particles, topology) == [0, 1, 0, 0]

    def test_swarm_best(self):
        """Test the swarm best is the lowest penalized pbest."""
        particles = [_particle([0.0]) for _ in range(3)]
        particles[2].pbest_penalized = -1.0

        assert swarm_best(particles) is particles[2]

    def test_percent_feasible(self):
        """Test the share of feasible pbests is a percentage."""
        particles = [_particle([0.0]) for _ in range(4)]
        particles[0].pbest_feasible = False

        assert percent_feasible_pbests(particles) == 75.0
        assert percent_feasible_pbests([]) == 0.0

    def test_repenalize_uses_cache(self, toy_problem):
        """Test relaxed tolerances re-penalize pbests without new evaluations."""
        evaluator = PenalizedEvaluator(toy_problem, PenaltyConfig())
        particles, _ = initialize_swarm(np.array([[1.0, 2.0], [0.5, -0.5]]), evaluator, ToleranceState.final())
        ce_before = evaluator.counters.ce

        repenalize(particles, evaluator, ToleranceState.fixed(10.0, 10.0))

        assert evaluator.counters.ce == ce_before
        assert all(p.pbest_feasible for p in particles)
        assert [p.pbest_penalized for p in particles] == [p.pbest_conflict for p in particles]
