"""Virtual spinning LiDAR: sensor spec and the ray set it emits."""

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..geometry import direction_from_angles


class SensorSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    m: int = Field(default=2048, ge=1, description="horizontal divisions")
    k: int = Field(default=64, ge=1, description="vertical divisions")
    min_range: float = Field(default=0.5, gt=0.0, description="meters")
    max_range: float = Field(default=100.0, gt=0.0, description="meters")
    theta_min: float = Field(default=88.0, ge=0.0, le=180.0, description="polar angle from +z, degrees")
    theta_max: float = Field(default=114.0, ge=0.0, le=180.0, description="polar angle from +z, degrees")
    frustum_expansion: float = Field(
        default=2.0, ge=1.0, le=3.0,
        description="frustum aperture as a multiple of the angular resolution",
    )
    occlusion_window: float = Field(
        default=1.0, gt=0.0,
        description="only points within this many meters of a frustum's nearest point are fitted",
    )
    min_support: int = Field(default=3, ge=3, description="minimum points per frustum plane fit")

    @model_validator(mode='after')
    def _check_intervals(self):
        if self.min_range >= self.max_range:
            raise ValueError(f"min_range {self.min_range} must be below max_range {self.max_range}")
        if self.theta_min >= self.theta_max:
            raise ValueError(f"theta_min {self.theta_min} must be below theta_max {self.theta_max}")
        return self

    @property
    def n_rays(self) -> int:
        return self.m * self.k

    @property
    def horizontal_resolution(self) -> float:
        return 360.0 / self.m

    @property
    def vertical_resolution(self) -> float:
        return (self.theta_max - self.theta_min) / self.k


class Ray(NamedTuple):
    i: int
    j: int
    phi: float
    theta: float
    direction: np.ndarray


@dataclass(frozen=True, eq=False)
class RaySet:
    """All m*k rays, stored flat in (j, i) order: ray id = j * m + i."""

    m: int
    k: int
    i: np.ndarray
    j: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    directions: np.ndarray

    def __len__(self) -> int:
        return self.m * self.k

    def ray_id(self, i: int, j: int) -> int:
        return j * self.m + i

    def ray(self, i: int, j: int) -> Ray:
        return self[self.ray_id(i, j)]

    def __getitem__(self, ray_id: int) -> Ray:
        return Ray(int(self.i[ray_id]), int(self.j[ray_id]), float(self.phi[ray_id]),
                   float(self.theta[ray_id]), self.directions[ray_id])

    def __iter__(self) -> Iterator[Ray]:
        for ray_id in range(len(self)):
            yield self[ray_id]


def build_rays(spec: SensorSpec) -> RaySet:
    """phi_i = (i / m) * 360, theta_j = theta_min + (j / k) * (theta_max - theta_min)."""
    j, i = np.divmod(np.arange(spec.n_rays, dtype=np.int64), spec.m)
    phi = i / spec.m * 360.0
    theta = spec.theta_min + j / spec.k * (spec.theta_max - spec.theta_min)
    directions = direction_from_angles(phi, theta)
    for arr in (i, j, phi, theta, directions):
        arr.setflags(write=False)
    return RaySet(spec.m, spec.k, i, j, phi, theta, directions)
