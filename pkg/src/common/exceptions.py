"""Domain exceptions shared by all services."""

from typing import Sequence

import numpy as np


class SwarmBenchError(Exception):
    """Root of every error raised by the optimizer and the harness."""


class DomainError(SwarmBenchError, ValueError):
    """A parameter lies outside its admissible range."""


class ConfigurationError(SwarmBenchError):
    """An experiment configuration or config file is invalid."""


class ProblemNotFoundError(SwarmBenchError, LookupError):
    """Unknown benchmark problem name."""

    def __init__(self, name: str, valid_names: Sequence[str]):
        self.name = name
        self.valid_names = list(valid_names)
        super().__init__(
            f"Unknown problem '{name}'. Valid names: {', '.join(self.valid_names)}"
        )


class EvaluationError(SwarmBenchError):
    """Objective or constraint evaluation produced a non-finite value."""

    def __init__(
        self,
        message: str,
        x: np.ndarray | None = None,
        constraint_index: int | None = None,
        particle_index: int | None = None,
    ):
        self.x = None if x is None else np.array(x, dtype=float, copy=True)
        self.constraint_index = constraint_index
        self.particle_index = particle_index
        super().__init__(message)

    def with_particle(self, particle_index: int) -> "EvaluationError":
        return EvaluationError(
            f"particle {particle_index}: {self.args[0]}",
            x=self.x,
            constraint_index=self.constraint_index,
            particle_index=particle_index,
        )


class ReportError(SwarmBenchError, OSError):
    """Output location cannot be written."""
