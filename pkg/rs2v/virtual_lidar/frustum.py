"""Assignment of points to the view frustums around each ray."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..geometry import from_spherical, to_spherical
from .sensor import SensorSpec

logger = logging.getLogger(__name__)


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5).astype(np.int64)


def continuous_indices(spherical: np.ndarray, spec: SensorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Fractional (i, j) grid coordinates of (rho, phi, theta) rows."""
    u = spherical[:, 1] * spec.m / 360.0
    v = (spherical[:, 2] - spec.theta_min) * spec.k / (spec.theta_max - spec.theta_min)
    return u, v


def nominal_bins(spherical, spec: SensorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """i = round(m phi / 360) mod m, j = round(k (theta - theta_min) / span)
    clamped to [0, k - 1]."""
    spherical = np.asarray(spherical, dtype=np.float64).reshape(-1, 3)
    u, v = continuous_indices(spherical, spec)
    i = np.mod(_round_half_up(u), spec.m)
    j = np.clip(_round_half_up(v), 0, spec.k - 1)
    return i, j


def assign_frustums(spherical, spec: SensorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Every (ray id, point id) membership, sorted by ray id then point id.

    Each point belongs to its nominal bin. With frustum_expansion e > 1 it
    also belongs to every bin whose ray is within e/2 resolution steps of it
    both horizontally and vertically.
    """
    spherical = np.asarray(spherical, dtype=np.float64).reshape(-1, 3)
    n = spherical.shape[0]
    i0, j0 = nominal_bins(spherical, spec)
    ray_ids = [j0 * spec.m + i0]
    point_ids = [np.arange(n, dtype=np.int64)]

    half = spec.frustum_expansion / 2.0
    if spec.frustum_expansion > 1.0 and n:
        u, v = continuous_indices(spherical, spec)
        iu, jv = _round_half_up(u), _round_half_up(v)
        reach = math.ceil(half)
        for di in range(-reach, reach + 1):
            ci = iu + di
            near_i = np.abs(u - ci) <= half
            for dj in range(-reach, reach + 1):
                cj = jv + dj
                keep = near_i & (np.abs(v - cj) <= half) & (cj >= 0) & (cj < spec.k)
                if not keep.any():
                    continue
                ray_ids.append(cj[keep] * spec.m + np.mod(ci[keep], spec.m))
                point_ids.append(np.flatnonzero(keep))

    ray_ids = np.concatenate(ray_ids)
    point_ids = np.concatenate(point_ids)
    keys = np.unique(ray_ids * max(n, 1) + point_ids)
    return keys // max(n, 1), keys % max(n, 1)


@dataclass(frozen=True, eq=False)
class FrustumBins:
    """Frustum membership of the non-ground and ground points.

    Memberships are parallel (ray id, point id) arrays sorted by ray id; ray
    id = j * m + i. The cartesian and spherical coordinates of both classes
    are kept alongside so per-bin fits need nothing else.
    """

    spec: SensorSpec
    nonground_xyz: np.ndarray
    nonground_sph: np.ndarray
    nonground_rays: np.ndarray
    nonground_points: np.ndarray
    ground_xyz: np.ndarray
    ground_sph: np.ndarray
    ground_rays: np.ndarray
    ground_points: np.ndarray

    @property
    def n_rays(self) -> int:
        return self.spec.n_rays

    def members(self, i: int, j: int, ground: bool = False) -> np.ndarray:
        rays, points = (self.ground_rays, self.ground_points) if ground else (self.nonground_rays, self.nonground_points)
        ray_id = j * self.spec.m + i
        lo, hi = np.searchsorted(rays, [ray_id, ray_id + 1])
        return points[lo:hi]

    def counts(self, ground: bool = False) -> np.ndarray:
        rays = self.ground_rays if ground else self.nonground_rays
        return np.bincount(rays, minlength=self.n_rays)

    def has_nonground(self) -> np.ndarray:
        return self.counts(ground=False) > 0

    def has_ground(self) -> np.ndarray:
        return self.counts(ground=True) > 0

    def as_mapping(self, ground: bool = False) -> Dict[Tuple[int, int], np.ndarray]:
        """{(i, j): point ids} for the non-empty bins of one class."""
        rays, points = (self.ground_rays, self.ground_points) if ground else (self.nonground_rays, self.nonground_points)
        if rays.size == 0:
            return {}
        uniq, starts = np.unique(rays, return_index=True)
        groups = np.split(points, starts[1:])
        return {(int(r % self.spec.m), int(r // self.spec.m)): g for r, g in zip(uniq, groups)}


def _as_spherical_and_xyz(points, spherical_input: bool):
    if points is None:
        return np.zeros((0, 3)), np.zeros((0, 3))
    arr = getattr(points, 'positions', points)
    arr = np.asarray(arr, dtype=np.float64).reshape(-1, 3)
    if spherical_input and not hasattr(points, 'positions'):
        return from_spherical(arr), arr
    return arr, to_spherical(arr)


def bin_points(non_ground, spec: SensorSpec, ground=None, spherical_input: bool = False) -> FrustumBins:
    """Bin the non-ground (and optionally ground) points into ray frustums.

    Inputs are PointClouds or (N, 3) arrays; arrays are cartesian unless
    spherical_input is set, in which case their rows are (rho, phi, theta).
    Points are expected to be range gated already.
    """
    ng_xyz, ng_sph = _as_spherical_and_xyz(non_ground, spherical_input)
    g_xyz, g_sph = _as_spherical_and_xyz(ground, spherical_input)
    ng_rays, ng_points = assign_frustums(ng_sph, spec)
    g_rays, g_points = assign_frustums(g_sph, spec)
    logger.debug(
        f"Binned {ng_xyz.shape[0]} non-ground points into {ng_rays.size} memberships and "
        f"{g_xyz.shape[0]} ground points into {g_rays.size} memberships"
    )
    return FrustumBins(spec, ng_xyz, ng_sph, ng_rays, ng_points, g_xyz, g_sph, g_rays, g_points)
