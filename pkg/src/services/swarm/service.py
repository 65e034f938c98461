"""Particle dynamics with synchronous best-experience updates."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.common.exceptions import DomainError
from src.services.constraints.schemas import EvaluationCounters, ToleranceState
from src.services.constraints.service import BatchEvaluation, PenalizedEvaluator, is_feasible
from src.services.swarm.enums import Formulation
from src.services.swarm.schemas import CoefficientSet, Particle, Topology


@dataclass
class StepResult:
    particles: list[Particle]
    lbest: list[int]
    evaluation: BatchEvaluation
    positions: np.ndarray
    counters: EvaluationCounters


def velocity_update(
    particle: Particle,
    lbest_position: np.ndarray,
    coeffs: CoefficientSet,
    rng: np.random.Generator,
) -> np.ndarray:
    """New velocity from the particle's pbest and its neighbourhood's best.

    Two uniform vectors are drawn per call, the individual term first.
    """
    x = particle.position
    if lbest_position.shape != x.shape or particle.pbest_position.shape != x.shape:
        raise DomainError("velocity update needs position, pbest and lbest of equal length")
    to_pbest = particle.pbest_position - x
    to_lbest = lbest_position - x
    u_i = rng.random(x.size)
    u_s = rng.random(x.size)

    if coeffs.formulation == Formulation.CLASSICAL:
        assert coeffs.iw is not None and coeffs.sw is not None
        return coeffs.w * particle.velocity + coeffs.iw * u_i * to_pbest + coeffs.sw * u_s * to_lbest

    assert coeffs.ip is not None and coeffs.sp is not None
    assert coeffs.phi_min is not None and coeffs.phi_max is not None
    width = coeffs.phi_max - coeffs.phi_min
    phi_i = coeffs.ip * (coeffs.phi_min + width * u_i)
    phi_s = coeffs.sp * (coeffs.phi_min + width * u_s)
    return coeffs.w * particle.velocity + phi_i * to_pbest + phi_s * to_lbest


def position_update(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """x + v, with no clamping to the bounds."""
    if x.shape != v.shape:
        raise DomainError(f"position and velocity shapes differ: {x.shape} vs {v.shape}")
    return x + v


def compute_lbest(particles: Sequence[Particle], topology: Topology) -> list[int]:
    """Per particle, the informer with the lowest pbest_penalized (ties go to the lowest index)."""
    penalized = [p.pbest_penalized for p in particles]
    return [min(nb, key=lambda j: (penalized[j], j)) for nb in topology.neighbourhoods]


def _particles_from_batch(
    positions: np.ndarray, batch: BatchEvaluation
) -> list[Particle]:
    return [
        Particle(
            position=positions[i].copy(),
            velocity=np.zeros_like(positions[i]),
            pbest_position=positions[i].copy(),
            pbest_conflict=float(batch.conflict[i]),
            pbest_raw_constraints=batch.raw[i].copy(),
            pbest_penalized=float(batch.penalized[i]),
            pbest_feasible=bool(batch.feasible[i]),
        )
        for i in range(len(positions))
    ]


def initialize_swarm(
    positions: np.ndarray,
    evaluator: PenalizedEvaluator,
    tolerances: ToleranceState,
) -> tuple[list[Particle], BatchEvaluation]:
    """Zero velocities, pbest = evaluated initial positions (one FE + one CE each)."""
    positions = np.asarray(positions, dtype=float)
    batch = evaluator.evaluate_batch(positions, tolerances)
    return _particles_from_batch(positions, batch), batch


def step_swarm(
    particles: list[Particle],
    topology: Topology,
    evaluator: PenalizedEvaluator,
    tolerances: ToleranceState,
    rng: np.random.Generator,
    coefficient_sets: Sequence[CoefficientSet],
    order: Optional[Sequence[int]] = None,
) -> StepResult:
    """
    One synchronous time-step, updating `particles` in place.

    All particles move using the pbests and lbests of the previous step; the
    new positions are then evaluated (in `order` when given) and pbests are
    replaced only on strict improvement of the penalized conflict.

    Raises:
        EvaluationError: With the offending particle index attached.
    """
    n = len(particles)
    if topology.n_particles != n:
        raise DomainError(f"topology has {topology.n_particles} particles, swarm has {n}")
    if len(coefficient_sets) < topology.n_subgroups:
        raise DomainError(
            f"topology has {topology.n_subgroups} subgroups, got {len(coefficient_sets)} coefficient sets"
        )

    lbest = compute_lbest(particles, topology)
    for i, p in enumerate(particles):
        coeffs = coefficient_sets[topology.subgroup_of[i]]
        p.velocity = velocity_update(p, particles[lbest[i]].pbest_position, coeffs, rng)
        p.position = position_update(p.position, p.velocity)

    sequence = list(range(n)) if order is None else list(order)
    if sorted(sequence) != list(range(n)):
        raise DomainError("evaluation order must be a permutation of the particle indices")
    positions = np.stack([particles[i].position for i in sequence])
    permuted = evaluator.evaluate_batch(positions, tolerances, particle_ids=sequence)

    inverse = np.argsort(sequence)
    batch = BatchEvaluation(
        conflict=permuted.conflict[inverse],
        raw=permuted.raw[inverse],
        penalized=permuted.penalized[inverse],
        feasible=permuted.feasible[inverse],
    )
    for i in sequence:
        p = particles[i]
        if batch.penalized[i] < p.pbest_penalized:
            p.pbest_position = p.position.copy()
            p.pbest_conflict = float(batch.conflict[i])
            p.pbest_raw_constraints = batch.raw[i].copy()
            p.pbest_penalized = float(batch.penalized[i])
    for p in particles:
        p.pbest_feasible = is_feasible(evaluator.problem, p.pbest_raw_constraints, p.pbest_position, tolerances)

    return StepResult(
        particles=particles,
        lbest=compute_lbest(particles, topology),
        evaluation=batch,
        positions=positions[inverse],
        counters=evaluator.counters,
    )


def repenalize(
    particles: Sequence[Particle],
    evaluator: PenalizedEvaluator,
    tolerances: ToleranceState,
) -> None:
    """Recompute pbest penalties and feasibility from the cached raw values (no CE)."""
    for p in particles:
        p.pbest_penalized = evaluator.penalize(
            p.pbest_conflict, p.pbest_raw_constraints, p.pbest_position, tolerances
        )
        p.pbest_feasible = is_feasible(evaluator.problem, p.pbest_raw_constraints, p.pbest_position, tolerances)


def percent_feasible_pbests(particles: Sequence[Particle]) -> float:
    if not particles:
        return 0.0
    return 100.0 * sum(p.pbest_feasible for p in particles) / len(particles)


def swarm_best(particles: Sequence[Particle]) -> Particle:
    """Particle holding the lowest penalized pbest (lowest index on ties)."""
    return min(enumerate(particles), key=lambda ip: (ip[1].pbest_penalized, ip[0]))[1]
