"""Registry of the g01-g13 test problems with their reference data."""

from functools import lru_cache
from typing import Optional

import numpy as np
import pandas as pd

from src.common.exceptions import ProblemNotFoundError
from src.services.benchmarks import problems as g
from src.services.benchmarks.schemas import BenchmarkMetadata
from src.services.constraints.schemas import Problem

METADATA: dict[str, BenchmarkMetadata] = {
    m.name: m
    for m in (
        BenchmarkMetadata(
            name="g01", known_optimum=-15.0, dimension=13, n_inequality=9, n_equality=0,
            fr_no_tolerance=0.0003, fr_desired_tolerance=0.0003, fr_initial_tolerance=23.4617,
            mean_initial_tol_ineq=89.92,
        ),
        BenchmarkMetadata(
            name="g02", known_optimum=-0.803619, dimension=20, n_inequality=2, n_equality=0,
            fr_no_tolerance=99.9971, fr_desired_tolerance=99.9971, fr_initial_tolerance=99.9971,
            mean_initial_tol_ineq=0.01,
        ),
        BenchmarkMetadata(
            name="g03", known_optimum=-1.000500, dimension=10, n_inequality=0, n_equality=1,
            fr_no_tolerance=None, fr_desired_tolerance=0.0002, fr_initial_tolerance=24.5335,
            mean_initial_tol_eq=1.66,
        ),
        BenchmarkMetadata(
            name="g04", known_optimum=-30665.538672, dimension=5, n_inequality=3, n_equality=0,
            fr_no_tolerance=26.9887, fr_desired_tolerance=26.9887, fr_initial_tolerance=30.2026,
            mean_initial_tol_ineq=0.11,
        ),
        BenchmarkMetadata(
            name="g05", known_optimum=5126.496714, dimension=4, n_inequality=1, n_equality=3,
            fr_no_tolerance=None, fr_desired_tolerance=None, fr_initial_tolerance=23.3053,
            mean_initial_tol_ineq=68.88, mean_initial_tol_eq=688.79,
        ),
        BenchmarkMetadata(
            name="g06", known_optimum=-6961.813876, dimension=2, n_inequality=2, n_equality=0,
            fr_no_tolerance=0.0074, fr_desired_tolerance=0.0074, fr_initial_tolerance=24.3050,
            mean_initial_tol_ineq=2790.51,
        ),
        BenchmarkMetadata(
            name="g07", known_optimum=24.306209, dimension=10, n_inequality=8, n_equality=0,
            fr_no_tolerance=0.0001, fr_desired_tolerance=0.0001, fr_initial_tolerance=23.8399,
            mean_initial_tol_ineq=383.89,
        ),
        BenchmarkMetadata(
            name="g08", known_optimum=-0.095825, dimension=2, n_inequality=2, n_equality=0,
            fr_no_tolerance=0.8610, fr_desired_tolerance=0.8610, fr_initial_tolerance=23.4371,
            mean_initial_tol_ineq=9.88,
        ),
        BenchmarkMetadata(
            name="g09", known_optimum=680.630057, dimension=7, n_inequality=4, n_equality=0,
            fr_no_tolerance=0.5232, fr_desired_tolerance=0.5232, fr_initial_tolerance=24.0533,
            mean_initial_tol_ineq=421.13,
        ),
        BenchmarkMetadata(
            name="g10", known_optimum=7049.248021, dimension=8, n_inequality=6, n_equality=0,
            fr_no_tolerance=0.0005, fr_desired_tolerance=0.0005, fr_initial_tolerance=21.1715,
            mean_initial_tol_ineq=10.83,
        ),
        BenchmarkMetadata(
            name="g11", known_optimum=0.749900, dimension=2, n_inequality=0, n_equality=1,
            fr_no_tolerance=None, fr_desired_tolerance=0.0108, fr_initial_tolerance=24.8914,
            mean_initial_tol_eq=0.26,
        ),
        BenchmarkMetadata(
            name="g12", known_optimum=-1.0, dimension=3, n_inequality=1, n_equality=0,
            fr_no_tolerance=4.7713, fr_desired_tolerance=4.7713, fr_initial_tolerance=22.0256,
            mean_initial_tol_ineq=0.11,
        ),
        BenchmarkMetadata(
            name="g13", known_optimum=0.053942, dimension=5, n_inequality=0, n_equality=3,
            fr_no_tolerance=None, fr_desired_tolerance=None, fr_initial_tolerance=22.8845,
            mean_initial_tol_eq=6.63,
        ),
    )
}

# Published optimal points, nudged inside the feasible region by at most 1e-7
REFERENCE_POSITIONS: dict[str, list[float]] = {
    "g01": [1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3, 3, 1],
    "g02": [
        3.16246061572501, 3.12833142812967, 3.09479212988791, 3.06145059523469,
        3.02792915885555, 2.99382606701730, 2.95866871765285, 2.92184227312450,
        0.49482511456933, 0.48835711005490, 0.48231642711865, 0.47664475092742,
        0.47129550835493, 0.46623099264167, 0.46142004984199, 0.45683664767217,
        0.45245876903267, 0.44826762241853, 0.44424700958760, 0.44038285956317,
    ],
    "g03": [
        0.31624357647273069, 0.316243577414238339, 0.316243578012245927,
        0.316243575663917895, 0.316243578205426066, 0.31624357738845069,
        0.316243575472849512, 0.316243577164783938, 0.316243578155820302,
        0.316243576147274916,
    ],
    "g04": [78, 33, 29.9952560257815985, 45, 36.7758129057882073],
    "g05": [679.94514829867967, 1026.066976001682, 0.11887636909441043, -0.39623348521583629],
    "g06": [14.09500000000100064, 0.8429607892175495668],
    "g07": [
        2.17199634142692, 2.3636830416034, 8.77392573913157, 5.09598443745273,
        0.990654756560493, 1.43057392853563, 1.32164415364306, 9.82872576524395,
        8.2800915887346, 8.3759266477347,
    ],
    "g08": [1.22797135260752599, 4.24537336612274885],
    "g09": [
        2.33049935147405174, 1.95137236847114592, -0.477541399510615805,
        4.36572624923625874, -0.624486959101388983, 1.03813099410962173,
        1.5942266780681519,
    ],
    "g10": [
        579.306685117979589, 1359.97067817935605, 5109.97065753133317, 182.01769963061534,
        295.601173702746792, 217.982300368384632, 286.41652592686852, 395.60117370174673,
    ],
    "g11": [-0.707036070037170616, 0.500000004333506807],
    "g12": [5, 5, 5],
    "g13": [
        -1.71714224003, 1.5957212403637724, 1.8272502406069431,
        -0.76365988191286704, -0.76365986703201272,
    ],
}

BOUNDS: dict[str, tuple[list[float], list[float]]] = {
    "g01": ([0.0] * 13, [1.0] * 9 + [100.0] * 3 + [1.0]),
    "g02": ([0.0] * 20, [10.0] * 20),
    "g03": ([0.0] * 10, [1.0] * 10),
    "g04": ([78, 33, 27, 27, 27], [102, 45, 45, 45, 45]),
    "g05": ([0, 0, -0.55, -0.55], [1200, 1200, 0.55, 0.55]),
    "g06": ([13, 0], [100, 100]),
    "g07": ([-10.0] * 10, [10.0] * 10),
    "g08": ([0, 0], [10, 10]),
    "g09": ([-10.0] * 7, [10.0] * 7),
    "g10": ([100, 1000, 1000, 10, 10, 10, 10, 10], [10000, 10000, 10000, 1000, 1000, 1000, 1000, 1000]),
    "g11": ([-1, -1], [1, 1]),
    "g12": ([0, 0, 0], [10, 10, 10]),
    "g13": ([-2.3, -2.3, -3.2, -3.2, -3.2], [2.3, 2.3, 3.2, 3.2, 3.2]),
}

PROBLEM_NAMES: tuple[str, ...] = tuple(METADATA)


@lru_cache(maxsize=None)
def get_problem(name: str) -> Problem:
    """Problem by name, with its reference metadata attached.

    Raises:
        ProblemNotFoundError: If `name` is not one of g01..g13.
    """
    key = name.strip().lower()
    if key not in METADATA:
        raise ProblemNotFoundError(name, PROBLEM_NAMES)
    meta = METADATA[key]
    lower, upper = BOUNDS[key]
    return Problem(
        name=key,
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
        objective=getattr(g, f"{key}_objective"),
        constraints=getattr(g, f"{key}_constraints"),
        n_inequality=meta.n_inequality,
        n_equality=meta.n_equality,
        known_optimum=meta.known_optimum,
        reference_position=np.asarray(REFERENCE_POSITIONS[key], dtype=float),
        metadata=meta,
    )


def get_metadata(name: str) -> BenchmarkMetadata:
    return get_problem(name).metadata  # type: ignore[return-value]


def resolve_problem_names(selector: str) -> list[str]:
    """'all', a single name, or a comma-separated list."""
    if selector.strip().lower() == "all":
        return list(PROBLEM_NAMES)
    names = [s.strip().lower() for s in selector.split(",") if s.strip()]
    for name in names:
        if name not in METADATA:
            raise ProblemNotFoundError(name, PROBLEM_NAMES)
    return names


def metadata_table(names: Optional[list[str]] = None) -> pd.DataFrame:
    """Reference features, one row per problem."""
    rows = [METADATA[n] for n in (names or PROBLEM_NAMES)]
    return pd.DataFrame(
        {
            "Problem": [m.name for m in rows],
            "Optimum": [m.known_optimum for m in rows],
            "Dimension": [m.dimension for m in rows],
            "Inequality constraints": [m.n_inequality for m in rows],
            "Equality constraints": [m.n_equality for m in rows],
            "FR [%]": [m.fr_no_tolerance for m in rows],
            "FR desired tol. [%]": [m.fr_desired_tolerance for m in rows],
            "FR initial tol. [%]": [m.fr_initial_tolerance for m in rows],
            "Mean initial Tol_ineq": [m.mean_initial_tol_ineq for m in rows],
            "Mean initial Tol_eq": [m.mean_initial_tol_eq for m in rows],
        }
    )
