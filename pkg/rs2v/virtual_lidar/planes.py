"""Total least squares plane fits and ray/plane intersection."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DegenerateGeometry

logger = logging.getLogger(__name__)

# both small covariance eigenvalues under this means collinear or coincident
DEGENERATE_EIGENVALUE = 1e-12
PARALLEL_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class Plane:
    """Points x with normal . x = offset. normal is unit length and faces the
    sensor origin."""

    normal: np.ndarray
    offset: float
    rms_residual: float = 0.0
    support: int = 0

    def distance(self, points) -> np.ndarray:
        """Signed distance of (N, 3) points, positive on the sensor side."""
        return np.asarray(points, dtype=np.float64).reshape(-1, 3) @ self.normal - self.offset

    def coefficients(self) -> np.ndarray:
        """(a, b, c, d) with a x + b y + c z + d = 0."""
        return np.append(self.normal, -self.offset)


@dataclass(frozen=True, eq=False)
class BatchPlanes:
    """Plane fits for many point groups at once; rows where valid is False
    hold no usable plane."""

    normals: np.ndarray
    offsets: np.ndarray
    rms_residuals: np.ndarray
    support: np.ndarray
    valid: np.ndarray

    def plane(self, g: int) -> Plane:
        return Plane(self.normals[g], float(self.offsets[g]), float(self.rms_residuals[g]), int(self.support[g]))


def fit_planes_batched(points, groups, n_groups: int, min_support: int = 3,
                       origin=(0.0, 0.0, 0.0)) -> BatchPlanes:
    """Fit one plane per group of points in a single vectorised pass.

    groups[n] is the group of points[n]. Each normal is the eigenvector of
    the group's centred covariance with the smallest eigenvalue, flipped so
    it points from the centroid toward origin.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    groups = np.asarray(groups, dtype=np.int64).reshape(-1)
    origin = np.asarray(origin, dtype=np.float64)

    counts = np.bincount(groups, minlength=n_groups)
    safe = np.maximum(counts, 1)
    centroids = np.column_stack([np.bincount(groups, weights=points[:, c], minlength=n_groups) for c in range(3)])
    centroids /= safe[:, None]

    # second pass over centred coordinates keeps the covariance exact for
    # points far from the origin
    centred = points - centroids[groups]
    cov = np.empty((n_groups, 3, 3))
    for a in range(3):
        for b in range(a, 3):
            cov_ab = np.bincount(groups, weights=centred[:, a] * centred[:, b], minlength=n_groups) / safe
            cov[:, a, b] = cov_ab
            cov[:, b, a] = cov_ab

    eigvals, eigvecs = np.linalg.eigh(cov)
    normals = eigvecs[:, :, 0]
    valid = (counts >= min_support) & (eigvals[:, 1] >= DEGENERATE_EIGENVALUE)

    facing = np.einsum('gc,gc->g', normals, origin - centroids)
    normals = np.where((facing < 0)[:, None], -normals, normals)
    offsets = np.einsum('gc,gc->g', normals, centroids)
    rms = np.sqrt(np.clip(eigvals[:, 0], 0.0, None))
    return BatchPlanes(normals, offsets, rms, counts, valid)


def fit_plane_tls(points, origin=(0.0, 0.0, 0.0)) -> Plane:
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if points.shape[0] < 3:
        raise DegenerateGeometry(f"plane fit needs at least 3 points, got {points.shape[0]}")
    batch = fit_planes_batched(points, np.zeros(points.shape[0], dtype=np.int64), 1, origin=origin)
    if not batch.valid[0]:
        raise DegenerateGeometry(f"{points.shape[0]} points are collinear or coincident; no unique plane")
    return batch.plane(0)


def intersect_rays_planes(directions, normals, offsets, min_range: float, max_range: float):
    """Ranges and hit mask for rays from the origin against one plane each.

    Returns (points (R, 3), hit (R,)). A ray misses when it is parallel to its
    plane or the hit lies outside [min_range, max_range].
    """
    directions = np.asarray(directions, dtype=np.float64).reshape(-1, 3)
    normals = np.broadcast_to(np.asarray(normals, dtype=np.float64), directions.shape)
    offsets = np.broadcast_to(np.asarray(offsets, dtype=np.float64), directions.shape[:1])
    denom = np.einsum('rc,rc->r', normals, directions)
    hit = np.abs(denom) > PARALLEL_EPS
    t = np.divide(offsets, denom, out=np.full(denom.shape, np.nan), where=hit)
    hit &= (t >= min_range) & (t <= max_range)
    points = directions * np.where(hit, t, 0.0)[:, None]
    return points, hit


def intersect_ray_plane(ray, plane: Plane, spec) -> Optional[np.ndarray]:
    """Point where ray meets plane, or None for a miss."""
    points, hit = intersect_rays_planes(ray.direction, plane.normal, plane.offset, spec.min_range, spec.max_range)
    return points[0] if hit[0] else None
