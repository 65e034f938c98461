"""Summary table, per-run traces and averaged traces as CSV files."""

import logging
import tempfile
from pathlib import Path
from typing import Optional

import pandas as pd

from src.common.exceptions import ReportError
from src.services.constraints.enums import ScheduleKind
from src.services.harness.schemas import SUMMARY_COLUMNS, TRACE_COLUMNS, RunResult, SuiteReport, SuiteStatistics

logger = logging.getLogger(__name__)

MISSING = "-"


def ensure_writable(output_dir: str | Path) -> Path:
    """Create `output_dir` and check a file can be written there.

    Raises:
        ReportError: If the directory cannot be created or written.
    """
    path = Path(output_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=path, prefix=".write-check-"):
            pass
    except OSError as e:
        raise ReportError(f"Output directory {path} is not writable: {e}") from e
    return path


def _fixed(value: Optional[float]) -> str:
    return MISSING if value is None else f"{value:.6f}"


def summary_frame(stats: SuiteStatistics) -> pd.DataFrame:
    """Statistics rows as strings, one column per summary heading."""
    records = [
        {
            "Problem": row.problem,
            "Optimum": f"{row.optimum:.6f}",
            "Type of tolerance relaxation": row.schedule.label,
            "BEST": _fixed(row.best),
            "MEDIAN": _fixed(row.median),
            "MEAN": _fixed(row.mean),
            "WORST": _fixed(row.worst),
            "[%] Feasible Solutions": f"{row.percent_feasible:.2f}",
            "[%] Successful Solutions": f"{row.percent_successful:.2f}",
            "Mean FEs": f"{row.mean_fe:.2E}",
            "Mean CEs": f"{row.mean_ce:.2E}",
            "Mean [%] Feasible PBESTs": f"{row.mean_percent_feasible_pbests:.2f}",
        }
        for row in stats.rows
    ]
    return pd.DataFrame(records, columns=SUMMARY_COLUMNS)


def initial_tolerances_frame(stats: SuiteStatistics) -> pd.DataFrame:
    rows = [r for r in stats.rows if r.schedule != ScheduleKind.NONE]
    return pd.DataFrame(
        {
            "Problem": [r.problem for r in rows],
            "Type of tolerance relaxation": [r.schedule.label for r in rows],
            "Mean initial Tol_ineq": [r.mean_initial_tol_ineq for r in rows],
            "Mean initial Tol_eq": [r.mean_initial_tol_eq for r in rows],
            "Mean self-tuning FR [%]": [r.mean_tuning_fr for r in rows],
            "Runs": [r.n_runs for r in rows],
        }
    )


def averaged_trace(results: list[RunResult]) -> Optional[pd.DataFrame]:
    """Arithmetic mean of the per-run traces at each time-step."""
    frames = [r.trace.to_frame() for r in results if r.trace is not None and len(r.trace)]
    if not frames:
        return None
    combined = pd.concat(frames, ignore_index=True)
    numeric = [c for c in TRACE_COLUMNS if c not in ("t", "update_kind")]
    return combined.groupby("t", sort=True)[numeric].mean().reset_index()


def emit_reports(report: SuiteReport, output_dir: str | Path) -> list[Path]:
    """
    Write the suite's reports under `output_dir`.

    Files:
        summary.csv: one statistics row per (problem, schedule)
        initial_tolerances.csv: mean self-tuned tolerances per (problem, schedule)
        failures.csv: aborted runs, only when there are any
        traces/<problem>_<schedule>_run<NN>.csv: per-step records of each run
        traces/<problem>_<schedule>_mean.csv: the cross-run averaged trace
    """
    root = ensure_writable(output_dir)
    stats = report.statistics
    written: list[Path] = []

    summary_path = root / "summary.csv"
    summary_frame(stats).to_csv(summary_path, index=False)
    written.append(summary_path)

    tolerances = initial_tolerances_frame(stats)
    if not tolerances.empty:
        tolerances_path = root / "initial_tolerances.csv"
        tolerances.to_csv(tolerances_path, index=False)
        written.append(tolerances_path)

    failures = [f.model_dump(mode="json") for o in report.outcomes for f in o.failures]
    if failures:
        failures_path = root / "failures.csv"
        pd.DataFrame(failures).to_csv(failures_path, index=False)
        written.append(failures_path)

    traces_dir = root / "traces"
    for outcome in report.outcomes:
        traced = [r for r in outcome.results if r.trace is not None]
        if not traced:
            continue
        traces_dir.mkdir(exist_ok=True)
        label = outcome.config.label
        for result in traced:
            assert result.trace is not None
            path = traces_dir / f"{label}_run{result.run_index:02d}.csv"
            result.trace.to_frame().to_csv(path, index=False)
            written.append(path)
        mean = averaged_trace(traced)
        if mean is not None:
            path = traces_dir / f"{label}_mean.csv"
            mean.to_csv(path, index=False)
            written.append(path)

    logger.info(f"Wrote {len(written)} report files to {root}")
    return written
