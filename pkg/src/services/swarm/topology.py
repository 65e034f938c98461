import math

from src.common.exceptions import DomainError
from src.services.swarm.schemas import Topology


def build_forward_topology(
    n_particles: int,
    n_subgroups: int = 3,
    links_per_particle: int = 2,
) -> Topology:
    """
    Directed ring: particle i is informed by itself and the next `links_per_particle` particles.

    Sub-neighbourhoods are contiguous blocks of ceil(N / n_subgroups) particles,
    numbered in ring order.

    Raises:
        DomainError: On zero particles, zero subgroups or links, or more subgroups than particles.
    """
    if n_particles < 1:
        raise DomainError(f"swarm needs at least one particle, got {n_particles}")
    if n_subgroups < 1 or links_per_particle < 1:
        raise DomainError("n_subgroups and links_per_particle must be positive")
    if n_subgroups > n_particles:
        raise DomainError(f"{n_subgroups} subgroups cannot be formed from {n_particles} particles")

    neighbourhoods = tuple(
        tuple(sorted({(i + k) % n_particles for k in range(links_per_particle + 1)}))
        for i in range(n_particles)
    )
    block = math.ceil(n_particles / n_subgroups)
    subgroup_of = tuple(i // block for i in range(n_particles))
    return Topology(neighbourhoods=neighbourhoods, subgroup_of=subgroup_of, n_subgroups=n_subgroups)


def forward_links_at(
    t: int,
    t_full: int,
    n_particles: int,
    initial_links: int = 2,
) -> int:
    """
    Forward links of every particle at time-step t.

    The count grows linearly from `initial_links` at t = 1 to n_particles - 1
    at t = t_full and stays there, so late in the search every particle is
    informed by the whole swarm.

    Raises:
        DomainError: On t or t_full below 1, or on fewer than one initial link.
    """
    if t < 1 or t_full < 1:
        raise DomainError(f"time-steps must be >= 1, got t={t}, t_full={t_full}")
    if initial_links < 1:
        raise DomainError(f"initial_links must be positive, got {initial_links}")
    full = max(initial_links, n_particles - 1)
    if t >= t_full:
        return full
    progress = (t - 1) / (t_full - 1) if t_full > 1 else 1.0
    return initial_links + int(math.floor(progress * (full - initial_links)))
