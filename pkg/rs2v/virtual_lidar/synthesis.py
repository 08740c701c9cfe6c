"""Resampling of a vehicle-frame scene along the virtual LiDAR's rays.

Non-ground surfaces get one local plane per frustum; the ground gets a single
global plane. Each ray then takes its intersection with the relevant plane.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DegenerateGeometry
from ..geometry import FrameTag
from ..pointcloud import PointCloud
from .frustum import FrustumBins, bin_points
from .planes import Plane, fit_plane_tls, fit_planes_batched, intersect_rays_planes
from .sensor import RaySet, SensorSpec, build_rays

logger = logging.getLogger(__name__)

SOURCE_NON_GROUND = 0
SOURCE_GROUND = 1


@dataclass(frozen=True, eq=False)
class RayHits:
    """Synthesised points with the id of the ray that produced each one."""

    ray_ids: np.ndarray
    points: np.ndarray

    @classmethod
    def empty(cls) -> "RayHits":
        return cls(np.zeros(0, dtype=np.int64), np.zeros((0, 3)))

    def __len__(self) -> int:
        return self.ray_ids.size

    def to_cloud(self, source_id: str = "") -> PointCloud:
        # no reflectance model: synthesised intensity is 0
        return PointCloud(self.points, np.zeros(len(self)), FrameTag.VEHICLE, source_id)


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    cloud: PointCloud
    non_ground: PointCloud
    ground: PointCloud
    ray_ids: np.ndarray
    sources: np.ndarray
    ground_plane: Optional[Plane] = None
    warnings: List[str] = field(default_factory=list)


def nearest_surface_mask(bins: FrustumBins) -> np.ndarray:
    """Memberships within occlusion_window of their frustum's nearest point.

    A frustum can see through to several surfaces in the roadside cloud; only
    the nearest one is visible from the vehicle.
    """
    rays = bins.nonground_rays
    if rays.size == 0:
        return np.zeros(0, dtype=bool)
    rho = bins.nonground_sph[bins.nonground_points, 0]
    _, starts, counts = np.unique(rays, return_index=True, return_counts=True)
    nearest = np.minimum.reduceat(rho, starts)
    return rho <= np.repeat(nearest, counts) + bins.spec.occlusion_window


def non_ground_hits(bins: FrustumBins, rays: RaySet, spec: SensorSpec) -> RayHits:
    if bins.nonground_rays.size == 0:
        return RayHits.empty()
    keep = nearest_surface_mask(bins)
    ray_ids = bins.nonground_rays[keep]
    points = bins.nonground_xyz[bins.nonground_points[keep]]

    uniq, groups = np.unique(ray_ids, return_inverse=True)
    planes = fit_planes_batched(points, groups, uniq.size, min_support=spec.min_support)
    skipped = int((~planes.valid).sum())
    if skipped:
        logger.debug(f"Skipped {skipped}/{uniq.size} non-ground frustums with too few or degenerate points")

    fitted = uniq[planes.valid]
    hit_points, hit = intersect_rays_planes(
        rays.directions[fitted], planes.normals[planes.valid], planes.offsets[planes.valid],
        spec.min_range, spec.max_range,
    )
    return RayHits(fitted[hit], hit_points[hit])


def synthesize_non_ground(bins: FrustumBins, rays: RaySet, spec: SensorSpec, source_id: str = "") -> PointCloud:
    """V_n: per-frustum plane fit on the non-ground points, then ray intersection."""
    return non_ground_hits(bins, rays, spec).to_cloud(source_id)


def fit_ground_plane(bins: FrustumBins) -> Plane:
    return fit_plane_tls(bins.ground_xyz)


def ground_hits(bins: FrustumBins, rays: RaySet, spec: SensorSpec,
                plane: Optional[Plane] = None) -> Tuple[RayHits, Optional[Plane]]:
    if plane is None:
        try:
            plane = fit_ground_plane(bins)
        except DegenerateGeometry as e:
            logger.warning(f"No ground plane ({e}); ground returns skipped")
            return RayHits.empty(), None

    # rays whose frustum holds non-ground points but no ground points are
    # blocked; rays with neither have nothing to resample
    eligible = np.flatnonzero(bins.has_ground())
    hit_points, hit = intersect_rays_planes(
        rays.directions[eligible], plane.normal, plane.offset, spec.min_range, spec.max_range,
    )
    return RayHits(eligible[hit], hit_points[hit]), plane


def synthesize_ground(ground: PointCloud, bins: FrustumBins, rays: RaySet, spec: SensorSpec,
                      source_id: str = "") -> PointCloud:
    """V_g: one global least-squares plane through P_cg, intersected with every
    ray that has ground points in its frustum."""
    if len(ground) != bins.ground_xyz.shape[0]:
        raise ValueError(f"ground cloud has {len(ground)} points but bins were built from {bins.ground_xyz.shape[0]}")
    hits, _ = ground_hits(bins, rays, spec)
    return hits.to_cloud(source_id or ground.source_id)


def merge_hits(non_ground: RayHits, ground: RayHits) -> Tuple[RayHits, RayHits, np.ndarray]:
    """Drop ground hits on rays that already have a non-ground hit and merge.

    Returns (merged, kept ground, source per merged point); merged is ordered
    by ray id, non-ground before ground.
    """
    keep = ~np.isin(ground.ray_ids, non_ground.ray_ids)
    ground = RayHits(ground.ray_ids[keep], ground.points[keep])
    ray_ids = np.concatenate((non_ground.ray_ids, ground.ray_ids))
    points = np.concatenate((non_ground.points, ground.points))
    sources = np.concatenate((
        np.full(len(non_ground), SOURCE_NON_GROUND, dtype=np.int8),
        np.full(len(ground), SOURCE_GROUND, dtype=np.int8),
    ))
    order = np.lexsort((sources, ray_ids))
    return RayHits(ray_ids[order], points[order]), ground, sources[order]


def synthesize(cloud: PointCloud, segmentation, spec: SensorSpec, rays: RaySet = None) -> SynthesisResult:
    """V = V_n merged with V_g for one range-gated vehicle-frame scene.

    segmentation is any object with non_ground and ground clouds that
    partition cloud.
    """
    n_parts = len(segmentation.non_ground) + len(segmentation.ground)
    if n_parts != len(cloud):
        raise ValueError(f"segmentation covers {n_parts} points, cloud has {len(cloud)}")
    rays = rays if rays is not None else build_rays(spec)
    bins = bin_points(segmentation.non_ground, spec, ground=segmentation.ground)

    warnings = []
    ng = non_ground_hits(bins, rays, spec)
    g, plane = ground_hits(bins, rays, spec)
    if plane is None and len(segmentation.ground):
        warnings.append(f"ground plane fit failed on {len(segmentation.ground)} ground points")
    elif plane is None:
        warnings.append("no ground points; ground returns skipped")

    merged, g_kept, sources = merge_hits(ng, g)
    source_id = cloud.source_id
    return SynthesisResult(
        cloud=merged.to_cloud(source_id),
        non_ground=ng.to_cloud(source_id),
        ground=g_kept.to_cloud(source_id),
        ray_ids=merged.ray_ids,
        sources=sources,
        ground_plane=plane,
        warnings=warnings,
    )
