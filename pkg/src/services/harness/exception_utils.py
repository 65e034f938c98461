"""Exception handling utilities for experiment runs."""

import logging
from functools import wraps
from typing import Callable

from src.common.exceptions import SwarmBenchError
from src.core.random_streams import run_seed
from src.services.harness.schemas import ExperimentConfig, RunFailure, RunResult

logger = logging.getLogger(__name__)

RunFunction = Callable[[ExperimentConfig, int], RunResult]


def _failure(config: ExperimentConfig, run_index: int, seed: int, error: Exception) -> RunFailure:
    return RunFailure(
        problem=config.problem,
        schedule=config.schedule_kind,
        run_index=run_index,
        seed=seed,
        error_type=type(error).__name__,
        message=str(error),
    )


def handle_run_exceptions(stage: str) -> Callable[[RunFunction], Callable[[ExperimentConfig, int], RunResult | RunFailure]]:
    """
    Decorator turning a failed run into a RunFailure record.

    Args:
        stage: Name of the stage for log messages
    """
    def decorator(func: RunFunction) -> Callable[[ExperimentConfig, int], RunResult | RunFailure]:
        @wraps(func)
        def wrapper(config: ExperimentConfig, run_index: int) -> RunResult | RunFailure:
            seed = run_seed(config.base_seed, run_index)
            try:
                return func(config, run_index)
            except SwarmBenchError as e:
                logger.error(
                    f"{stage} {config.label} #{run_index} (seed {seed}) aborted: {e}", exc_info=True
                )
                return _failure(config, run_index, seed, e)
            except Exception as e:
                logger.exception(
                    f"{stage} {config.label} #{run_index} (seed {seed}) crashed with {type(e).__name__}: {e}"
                )
                return _failure(config, run_index, seed, e)
        return wrapper
    return decorator


run_exception_handler = handle_run_exceptions("Run")
