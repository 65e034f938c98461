"""Seeded random streams, split per run component."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RunStreams:
    """Independent generators for one run.

    Initialization, swarm dynamics and tolerance self-tuning draw from
    separate streams, so switching the schedule kind never changes the
    initial swarm of a given seed.
    """

    initialization: np.random.Generator
    dynamics: np.random.Generator
    tuning: np.random.Generator


def run_seed(base_seed: int, run_index: int) -> int:
    return base_seed + run_index


def spawn_run_streams(seed: int) -> RunStreams:
    init_seq, dynamics_seq, tuning_seq = np.random.SeedSequence(seed).spawn(3)
    return RunStreams(
        initialization=np.random.default_rng(init_seq),
        dynamics=np.random.default_rng(dynamics_seq),
        tuning=np.random.default_rng(tuning_seq),
    )


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)
