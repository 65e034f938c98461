"""Command-line commands: run, fr, problems, tune."""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import numpy as np
import pandas as pd
import typer
from pydantic import ValidationError

from src.common.exceptions import ConfigurationError, DomainError, ProblemNotFoundError, ReportError
from src.core.config import settings
from src.core.random_streams import make_rng, run_seed, spawn_run_streams
from src.services.benchmarks.repository import get_problem, metadata_table, resolve_problem_names
from src.services.benchmarks.service import estimate_feasibility_ratio, feasibility_profile
from src.services.constraints.enums import ScheduleKind
from src.services.constraints.schemas import ToleranceState
from src.services.harness.reports import emit_reports, ensure_writable
from src.services.harness.service import build_experiment_configs, load_config_file, run_suite_sync
from src.services.tolerance.schemas import ScheduleConfig
from src.services.tolerance.self_tuning import self_tune_initial_tolerances

logger = logging.getLogger(__name__)

router = typer.Typer(no_args_is_help=True, add_completion=False)

EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map configuration errors to exit code 2 and I/O errors to exit code 3."""
    try:
        yield
    except (ConfigurationError, ProblemNotFoundError, DomainError, ValidationError) as e:
        typer.echo(f"Configuration error: {e}", err=True)
        raise typer.Exit(code=EXIT_CONFIG_ERROR)
    except (ReportError, OSError) as e:
        typer.echo(f"I/O error: {e}", err=True)
        raise typer.Exit(code=EXIT_IO_ERROR)


def _parse_window(value: Optional[str]) -> Optional[tuple[float, float]]:
    if value is None:
        return None
    try:
        low, high = (float(v) for v in value.split(","))
    except ValueError as e:
        raise ConfigurationError(f"--target-fr expects LO,HI, got '{value}'") from e
    return low, high


def _split(value: Optional[str]) -> Optional[list[str]]:
    return None if value is None else [v.strip() for v in value.split(",") if v.strip()]


@router.command()
def run(
    problem: Optional[str] = typer.Option(None, help="g01..g13, a comma-separated list, or 'all'"),
    schedule: Optional[str] = typer.Option(None, help="none, exp, adaptive, a comma-separated list, or 'all'"),
    runs: Optional[int] = typer.Option(None, help="Runs per problem and schedule"),
    particles: Optional[int] = typer.Option(None, help="Swarm size"),
    steps: Optional[int] = typer.Option(None, help="Time-steps per run (t_max)"),
    seed: Optional[int] = typer.Option(None, help="Base seed; run i uses seed + i"),
    out: Optional[str] = typer.Option(None, help="Output directory"),
    probe_budget: Optional[int] = typer.Option(None, help="Samples per self-tuning probe"),
    target_fr: Optional[str] = typer.Option(None, help="Self-tuning feasibility window LO,HI in percent"),
    penalty: Optional[str] = typer.Option(None, help="proposed or static"),
    lh_candidates: Optional[int] = typer.Option(None, help="Latin-hypercube designs to choose from"),
    workers: Optional[int] = typer.Option(None, help="Parallel runs (1 = in-process)"),
    no_traces: bool = typer.Option(False, "--no-traces", help="Skip per-step trace files"),
    config: Optional[Path] = typer.Option(None, help="YAML experiment file; flags override it"),
) -> None:
    """Run the benchmark protocol and write summary, tolerance and trace reports."""
    with exit_codes():
        file_data = load_config_file(config) if config is not None else {}
        schedule_overrides: dict = {}
        if probe_budget is not None:
            schedule_overrides["sampling_budget_per_probe"] = probe_budget
        window = _parse_window(target_fr)
        if window is not None:
            schedule_overrides["target_fr_low"], schedule_overrides["target_fr_high"] = window

        overrides = {
            "problems": problem,
            "schedules": _split(schedule),
            "n_runs": runs,
            "n_particles": particles,
            "t_max": steps,
            "base_seed": seed,
            "output_dir": out,
            "lh_candidates": lh_candidates,
            "record_traces": False if no_traces else None,
            "schedule": schedule_overrides or None,
            "penalty": {"scheme": penalty} if penalty is not None else None,
        }
        configs = build_experiment_configs(file_data, overrides)
        output_dir = configs[0].output_dir
        ensure_writable(output_dir)

        report = run_suite_sync(configs, workers or file_data.get("max_workers") or settings.MAX_WORKERS)
        emit_reports(report, output_dir)
        typer.echo(pd.DataFrame([r.model_dump(mode="json") for r in report.statistics.rows]).to_string(index=False))
        typer.echo(f"Reports written to {output_dir}")


@router.command()
def fr(
    problem: str = typer.Option(..., help="g01..g13, a comma-separated list, or 'all'"),
    tol_ineq: Optional[float] = typer.Option(None, help="Inequality tolerance"),
    tol_eq: Optional[float] = typer.Option(None, help="Equality tolerance"),
    samples: int = typer.Option(settings.FR_SAMPLES, help="Uniform samples per estimate"),
    seed: int = typer.Option(settings.BASE_SEED, help="Random seed"),
    profile: bool = typer.Option(False, "--profile", help="Also estimate with no and with the desired tolerances"),
) -> None:
    """Estimate feasibility ratios by uniform sampling within the bounds."""
    with exit_codes():
        rows = []
        for name in resolve_problem_names(problem):
            p = get_problem(name)
            given = None
            if tol_ineq is not None or tol_eq is not None:
                given = ToleranceState.fixed(tol_ineq or 0.0, tol_eq if tol_eq is not None else 0.0)
            rng = make_rng(seed)
            if profile:
                rows.append(feasibility_profile(p, samples, rng, given).model_dump())
            else:
                tol = given if given is not None else ToleranceState.zero()
                rows.append(
                    {
                        "name": name,
                        "tol_ineq": tol.tol_ineq,
                        "tol_eq": tol.tol_eq,
                        "fr": estimate_feasibility_ratio(p, tol, samples, rng),
                    }
                )
        typer.echo(pd.DataFrame(rows).to_string(index=False))


@router.command()
def problems(
    estimate: bool = typer.Option(False, "--estimate", help="Add sampled feasibility ratios"),
    samples: int = typer.Option(settings.FR_SAMPLES, help="Uniform samples per estimate"),
    seed: int = typer.Option(settings.BASE_SEED, help="Random seed"),
) -> None:
    """Print the reference features of the test problems."""
    with exit_codes():
        table = metadata_table()
        if estimate:
            profiles = [feasibility_profile(get_problem(n), samples, make_rng(seed)) for n in table["Problem"]]
            table["Estimated FR [%]"] = [p.fr_no_tolerance for p in profiles]
            table["Estimated FR desired tol. [%]"] = [p.fr_desired_tolerance for p in profiles]
        typer.echo(table.to_string(index=False))


@router.command()
def tune(
    problem: str = typer.Option("all", help="g01..g13, a comma-separated list, or 'all'"),
    runs: int = typer.Option(25, help="Seeds to average over"),
    seed: int = typer.Option(settings.BASE_SEED, help="Base seed; run i uses seed + i"),
    probe_budget: int = typer.Option(1000, help="Samples per self-tuning probe"),
    target_fr: Optional[str] = typer.Option(None, help="Feasibility window LO,HI in percent"),
    out: Optional[str] = typer.Option(None, help="Write the table as CSV into this directory"),
) -> None:
    """Run only the initial-tolerance self-tuning and report mean tolerances."""
    with exit_codes():
        window = _parse_window(target_fr)
        cfg = ScheduleConfig(
            kind=ScheduleKind.PSEUDO_ADAPTIVE,
            sampling_budget_per_probe=probe_budget,
            **({"target_fr_low": window[0], "target_fr_high": window[1]} if window else {}),
        )
        if out is not None:
            ensure_writable(out)
        rows = []
        for name in resolve_problem_names(problem):
            p = get_problem(name)
            outcomes = [
                self_tune_initial_tolerances(p, cfg, spawn_run_streams(run_seed(seed, i)).tuning)
                for i in range(runs)
            ]
            rows.append(
                {
                    "Problem": name,
                    "Mean initial Tol_ineq": float(np.mean([o.state.tol_ineq for o in outcomes])) if p.n_inequality else None,
                    "Mean initial Tol_eq": float(np.mean([o.state.tol_eq for o in outcomes])) if p.n_equality else None,
                    "Mean FR [%]": float(np.mean([o.achieved_fr for o in outcomes])),
                    "Converged [%]": 100.0 * sum(o.converged for o in outcomes) / runs,
                    "Mean probes": float(np.mean([o.n_probes for o in outcomes])),
                }
            )
        table = pd.DataFrame(rows)
        typer.echo(table.to_string(index=False))
        if out is not None:
            path = Path(out) / "initial_tolerances.csv"
            table.to_csv(path, index=False)
            typer.echo(f"Wrote {path}")
