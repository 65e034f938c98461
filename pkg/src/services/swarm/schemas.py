"""Swarm data: coefficient sets, particles and the neighbourhood topology."""

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.services.swarm.enums import Formulation

CENTRE_REL_TOL = 1e-12


class CoefficientSet(BaseModel):
    """Dynamics coefficients of one sub-neighbourhood.

    Classical sets use iw/sw with aw = iw + sw. RRR sets draw the attraction
    strengths from [phi_min, phi_max], an interval centred on aw, split by
    ip (individuality) and sp = 1 - ip (sociality).
    """

    model_config = ConfigDict(frozen=True)

    formulation: Formulation
    w: float
    aw: float
    iw: Optional[float] = None
    sw: Optional[float] = None
    ip: Optional[float] = None
    sp: Optional[float] = None
    phi_min: Optional[float] = None
    phi_max: Optional[float] = None

    @model_validator(mode="after")
    def check_formulation(self) -> "CoefficientSet":
        if self.formulation == Formulation.CLASSICAL:
            if self.iw is None or self.sw is None:
                raise ValueError("classical coefficients need iw and sw")
            if self.iw < 0.0 or self.sw < 0.0:
                raise ValueError("iw and sw must be non-negative")
            if self.aw != self.iw + self.sw:
                raise ValueError(f"aw must equal iw + sw, got {self.aw} != {self.iw + self.sw}")
            return self

        if self.ip is None or self.sp is None or self.phi_min is None or self.phi_max is None:
            raise ValueError(f"{self.formulation.value} coefficients need ip, sp, phi_min and phi_max")
        if not 0.0 <= self.ip < 1.0:
            raise ValueError(f"ip must lie in [0, 1), got {self.ip}")
        if self.sp != 1.0 - self.ip:
            raise ValueError("sp must equal 1 - ip")
        if self.phi_min > self.phi_max:
            raise ValueError("phi_min must not exceed phi_max")
        centre = (self.phi_min + self.phi_max) / 2.0
        if abs(centre - self.aw) > CENTRE_REL_TOL * abs(self.aw):
            raise ValueError(f"aw={self.aw} is not the centre of [{self.phi_min}, {self.phi_max}]")
        return self


class CoefficientSpec(BaseModel):
    """Config-file description of a sub-neighbourhood's coefficients."""

    formulation: Formulation
    aw: Optional[float] = Field(default=None, gt=0.0)
    ip: float = Field(default=0.5, ge=0.0, lt=1.0)
    w: Optional[float] = None
    iw: Optional[float] = None
    sw: Optional[float] = None


@dataclass
class Particle:
    """Position, velocity and personal best (with cached raw constraint values)."""

    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_conflict: float
    pbest_raw_constraints: np.ndarray
    pbest_penalized: float
    pbest_feasible: bool

    @property
    def n(self) -> int:
        return int(self.position.size)


@dataclass(frozen=True)
class Topology:
    """Informer lists (sorted, self included) and sub-neighbourhood membership."""

    neighbourhoods: tuple[tuple[int, ...], ...]
    subgroup_of: tuple[int, ...]
    n_subgroups: int

    @property
    def n_particles(self) -> int:
        return len(self.neighbourhoods)

    def members(self, subgroup: int) -> list[int]:
        return [i for i, g in enumerate(self.subgroup_of) if g == subgroup]

    def is_connected(self) -> bool:
        """Every particle reaches every other along informer links, in both directions."""
        n = self.n_particles
        forward: list[list[int]] = [list(nb) for nb in self.neighbourhoods]
        backward: list[list[int]] = [[] for _ in range(n)]
        for i, nb in enumerate(self.neighbourhoods):
            for j in nb:
                backward[j].append(i)
        return _reaches_all(forward) and _reaches_all(backward)


def _reaches_all(adjacency: list[list[int]]) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in adjacency[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == len(adjacency)
