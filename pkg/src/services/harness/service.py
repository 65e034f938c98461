"""Experiment orchestration: single runs, suites of runs and their statistics."""

import asyncio
import logging
import math
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import yaml
from pydantic import ValidationError

from src.common.exceptions import ConfigurationError
from src.core.config import settings
from src.core.random_streams import run_seed, spawn_run_streams
from src.services.benchmarks.repository import get_problem, resolve_problem_names
from src.services.benchmarks.service import latin_hypercube_init
from src.services.constraints.enums import ScheduleKind
from src.services.constraints.schemas import EvaluationCounters, Problem, ToleranceState
from src.services.constraints.service import BatchEvaluation, PenalizedEvaluator, feasible_mask
from src.services.harness.exception_utils import run_exception_handler
from src.services.harness.schemas import (
    ExperimentConfig,
    ExperimentOutcome,
    RunFailure,
    RunResult,
    RunTrace,
    StatisticsRow,
    SuiteReport,
)
from src.services.swarm.coefficients import coefficients_from_spec
from src.services.swarm.service import (
    initialize_swarm,
    percent_feasible_pbests,
    repenalize,
    step_swarm,
    swarm_best,
)
from src.services.swarm.topology import build_forward_topology, forward_links_at
from src.services.tolerance.enums import ToleranceUpdateKind
from src.services.tolerance.self_tuning import self_tune_initial_tolerances
from src.services.tolerance.service import advance_schedule, initial_state

logger = logging.getLogger(__name__)


class BestFeasibleTracker:
    """Lowest raw conflict seen so far among points feasible at the final tolerances."""

    def __init__(self, problem: Problem, final: ToleranceState):
        self.problem = problem
        self.final = final
        self.conflict: Optional[float] = None
        self.position: Optional[np.ndarray] = None

    def update(self, positions: np.ndarray, batch: BatchEvaluation) -> None:
        mask = feasible_mask(self.problem, batch.raw, positions, self.final)
        if not np.any(mask):
            return
        candidates = np.where(mask, batch.conflict, np.inf)
        i = int(np.argmin(candidates))
        if self.conflict is None or candidates[i] < self.conflict:
            self.conflict = float(candidates[i])
            self.position = positions[i].copy()

    @property
    def found(self) -> bool:
        return self.conflict is not None


def _append_trace(
    trace: RunTrace,
    t: int,
    state: ToleranceState,
    per: float,
    tracker: BestFeasibleTracker,
    particles: list,
    kind: ToleranceUpdateKind,
) -> None:
    trace.t.append(t)
    trace.tol_ineq.append(state.tol_ineq)
    trace.tol_eq.append(state.tol_eq)
    trace.percent_feasible_pbests.append(per)
    trace.best_feasible_conflict.append(tracker.conflict if tracker.conflict is not None else math.nan)
    trace.mean_pbest_conflict.append(float(np.mean([p.pbest_conflict for p in particles])))
    trace.swarm_best_conflict.append(swarm_best(particles).pbest_conflict)
    trace.update_kind.append(kind.value)


def run_single(config: ExperimentConfig, run_index: int = 0) -> RunResult:
    """
    One optimization run with seed base_seed + run_index.

    Time-step t = 1 evaluates the Latin-hypercube initial positions; the swarm
    moves at t = 2..t_max, so FE = n_particles * t_max. The best-found point is
    judged at the final tolerances throughout the run.

    Particles are evaluated in a fresh random order each step, and the forward
    neighbourhood widens until neighbourhood_full_step (when set).
    """
    seed = run_seed(config.base_seed, run_index)
    problem = get_problem(config.problem)
    streams = spawn_run_streams(seed)
    schedule = config.schedule
    counters = EvaluationCounters()
    evaluator = PenalizedEvaluator(problem, config.penalty, counters)
    final = ToleranceState.final()

    logger.info(f"Run {config.label} #{run_index} started (seed {seed})")

    tuning = None
    if schedule.kind == ScheduleKind.NONE:
        state = initial_state(schedule)
    else:
        tuning = self_tune_initial_tolerances(problem, schedule, streams.tuning)
        counters.ce += tuning.ce_count
        state = tuning.state
    initial_tol_ineq, initial_tol_eq = state.tol_ineq, state.tol_eq

    links = config.links_per_particle
    full_step = config.neighbourhood_full_step
    topology = build_forward_topology(config.n_particles, config.n_subgroups, links)
    coefficient_sets = [coefficients_from_spec(spec) for spec in config.subgroups]
    positions = latin_hypercube_init(
        config.n_particles, problem.lower, problem.upper, config.lh_candidates, streams.initialization
    )

    tracker = BestFeasibleTracker(problem, final)
    trace = RunTrace()
    particles, batch = initialize_swarm(positions, evaluator, state)
    tracker.update(positions, batch)

    for t in range(1, config.t_max + 1):
        if t > 1:
            if full_step is not None:
                grown = forward_links_at(t, full_step, config.n_particles, config.links_per_particle)
                if grown != links:
                    links = grown
                    topology = build_forward_topology(config.n_particles, config.n_subgroups, links)
            order = streams.dynamics.permutation(config.n_particles)
            step = step_swarm(
                particles, topology, evaluator, state, streams.dynamics, coefficient_sets, order=order.tolist()
            )
            tracker.update(step.positions, step.evaluation)

        per = percent_feasible_pbests(particles)
        new_state, kind = advance_schedule(state, t, config.t_max, per, schedule)
        if not new_state.same_tolerances(state):
            repenalize(particles, evaluator, new_state)
        state = new_state

        if config.record_traces:
            _append_trace(trace, t, state, per, tracker, particles, kind)

    error = tracker.conflict - problem.known_optimum if tracker.conflict is not None else None
    success = error is not None and abs(error) <= config.success_threshold
    if counters.saturated:
        logger.warning(f"Run {config.label} #{run_index}: {counters.saturated} penalized conflicts saturated")
    if not tracker.found:
        logger.warning(f"Run {config.label} #{run_index}: no point feasible at the final tolerances")
    logger.info(
        f"Run {config.label} #{run_index} finished: FEs={counters.fe} CEs={counters.ce} "
        f"best={tracker.conflict} success={success}"
    )

    return RunResult(
        problem=problem.name,
        schedule=schedule.kind,
        run_index=run_index,
        seed=seed,
        found_feasible=tracker.found,
        best_conflict=tracker.conflict,
        best_position=tracker.position.tolist() if tracker.position is not None else None,
        error=error,
        success=success,
        fe=counters.fe,
        ce=counters.ce,
        saturated=counters.saturated,
        percent_feasible_pbests=percent_feasible_pbests(particles),
        initial_tol_ineq=initial_tol_ineq,
        initial_tol_eq=initial_tol_eq,
        tuning_fr=tuning.achieved_fr if tuning is not None else None,
        tuning_probes=tuning.n_probes if tuning is not None else 0,
        tuning_converged=tuning.converged if tuning is not None else None,
        trace=trace if config.record_traces else None,
    )


@run_exception_handler
def execute_run(config: ExperimentConfig, run_index: int) -> RunResult:
    return run_single(config, run_index)


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


def aggregate_runs(
    config: ExperimentConfig,
    results: Sequence[RunResult],
    n_failed: int = 0,
) -> StatisticsRow:
    """
    Statistics row over completed runs.

    Runs that never found a finally-feasible point count in the feasibility
    percentage but not in BEST/MEDIAN/MEAN/WORST. MEDIAN is the lower middle
    order statistic.
    """
    problem = get_problem(config.problem)
    n = len(results)
    conflicts = sorted(r.best_conflict for r in results if r.found_feasible and r.best_conflict is not None)
    tol_ineq = [r.initial_tol_ineq for r in results if problem.n_inequality > 0]
    tol_eq = [r.initial_tol_eq for r in results if problem.n_equality > 0]
    tuning_fr = [r.tuning_fr for r in results if r.tuning_fr is not None]

    return StatisticsRow(
        problem=problem.name,
        optimum=problem.known_optimum,
        schedule=config.schedule_kind,
        best=conflicts[0] if conflicts else None,
        median=conflicts[(len(conflicts) - 1) // 2] if conflicts else None,
        mean=_mean(conflicts),
        worst=conflicts[-1] if conflicts else None,
        percent_feasible=100.0 * sum(r.found_feasible for r in results) / n if n else 0.0,
        percent_successful=100.0 * sum(r.success for r in results) / n if n else 0.0,
        mean_fe=_mean([r.fe for r in results]) or 0.0,
        mean_ce=_mean([r.ce for r in results]) or 0.0,
        mean_percent_feasible_pbests=_mean([r.percent_feasible_pbests for r in results]) or 0.0,
        n_runs=n,
        n_failed=n_failed,
        mean_initial_tol_ineq=_mean(tol_ineq),
        mean_initial_tol_eq=_mean(tol_eq),
        mean_tuning_fr=_mean(tuning_fr),
    )


def _executor(max_workers: int) -> Executor:
    if max_workers == 1:
        return ThreadPoolExecutor(max_workers=1)
    return ProcessPoolExecutor(max_workers=max_workers)


async def run_suite(
    configs: Sequence[ExperimentConfig],
    max_workers: Optional[int] = None,
) -> SuiteReport:
    """
    Run every configuration n_runs times and aggregate each into a statistics row.

    Runs are dispatched to an executor (a process pool when max_workers > 1)
    and re-ordered by run index before aggregation.
    """
    workers = max_workers or settings.MAX_WORKERS
    loop = asyncio.get_running_loop()
    with _executor(workers) as pool:
        tasks = [
            [loop.run_in_executor(pool, execute_run, config, i) for i in range(config.n_runs)]
            for config in configs
        ]
        gathered = [await asyncio.gather(*group) for group in tasks]

    outcomes = []
    for config, group in zip(configs, gathered):
        ordered = sorted(group, key=lambda r: r.run_index)
        results = [r for r in ordered if isinstance(r, RunResult)]
        failures = [r for r in ordered if isinstance(r, RunFailure)]
        row = aggregate_runs(config, results, n_failed=len(failures))
        logger.info(
            f"Suite {config.label}: {row.n_runs} runs, {row.n_failed} failed, "
            f"feasible {row.percent_feasible:.2f}%, successful {row.percent_successful:.2f}%"
        )
        outcomes.append(
            ExperimentOutcome(config=config, results=results, failures=failures, statistics=row)
        )
    return SuiteReport(outcomes=outcomes)


def run_suite_sync(configs: Sequence[ExperimentConfig], max_workers: Optional[int] = None) -> SuiteReport:
    return asyncio.run(run_suite(configs, max_workers))


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Experiment settings from a YAML file.

    Raises:
        ConfigurationError: If the file is missing, unreadable or not a mapping.
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must contain a mapping")
    return data


def _deep_merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_experiment_configs(
    file_data: Optional[dict[str, Any]] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> list[ExperimentConfig]:
    """
    Expand settings into one ExperimentConfig per (problem, schedule) pair.

    `problems` is 'all', a name or a list; `schedules` a kind or a list of
    kinds. Later sources win: file data, then explicit overrides.

    Raises:
        ConfigurationError: If the merged settings do not validate.
    """
    data = _deep_merge(file_data or {}, {k: v for k, v in (overrides or {}).items() if v is not None})
    problems = data.pop("problems", data.pop("problem", "all"))
    schedules = data.pop("schedules", data.pop("schedule_kind", ScheduleKind.PSEUDO_ADAPTIVE.value))
    problem_names = resolve_problem_names(problems if isinstance(problems, str) else ",".join(problems))
    kinds = [schedules] if isinstance(schedules, str) else list(schedules)
    if kinds == ["all"]:
        kinds = [kind.value for kind in ScheduleKind]

    configs = []
    for kind in kinds:
        for name in problem_names:
            schedule = dict(data.get("schedule") or {}) | {"kind": kind}
            try:
                configs.append(ExperimentConfig.model_validate(data | {"problem": name, "schedule": schedule}))
            except ValidationError as e:
                raise ConfigurationError(f"Invalid experiment configuration for {name}/{kind}: {e}") from e
    return configs
