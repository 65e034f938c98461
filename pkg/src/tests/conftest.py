"""Shared fixtures: small hand-made problems and configurations."""

import numpy as np
import pytest

from src.services.constraints.schemas import PenaltyConfig, Problem


def _sphere(x: np.ndarray) -> np.ndarray:
    return np.sum(x**2, axis=-1)


def _toy_constraints(x: np.ndarray) -> np.ndarray:
    # g1 = x0 (inequality), g2 = x1 (equality)
    return np.stack([x[..., 0], x[..., 1]], axis=-1)


def _unstable_constraints(x: np.ndarray) -> np.ndarray:
    return np.stack([np.where(x[..., 0] > 3.0, np.nan, x[..., 0])], axis=-1)


@pytest.fixture
def toy_problem() -> Problem:
    """Sphere on [-5, 5]^2 with g1 = x0 <= 0 and g2 = x1 = 0."""
    return Problem(
        name="toy",
        lower=np.array([-5.0, -5.0]),
        upper=np.array([5.0, 5.0]),
        objective=_sphere,
        constraints=_toy_constraints,
        n_inequality=1,
        n_equality=1,
        known_optimum=0.0,
    )


@pytest.fixture
def unstable_problem() -> Problem:
    """Sphere whose only constraint is NaN once x0 exceeds 3."""
    return Problem(
        name="unstable",
        lower=np.array([-5.0, -5.0]),
        upper=np.array([5.0, 5.0]),
        objective=_sphere,
        constraints=_unstable_constraints,
        n_inequality=1,
        n_equality=0,
        known_optimum=0.0,
    )


@pytest.fixture
def penalty() -> PenaltyConfig:
    return PenaltyConfig()
