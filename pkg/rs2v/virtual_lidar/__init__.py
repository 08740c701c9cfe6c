from .sensor import SensorSpec, Ray, RaySet, build_rays
from .frustum import FrustumBins, bin_points, assign_frustums, nominal_bins
from .planes import Plane, BatchPlanes, fit_plane_tls, fit_planes_batched, intersect_ray_plane, intersect_rays_planes
from .synthesis import (
    RayHits,
    SynthesisResult,
    synthesize,
    synthesize_non_ground,
    synthesize_ground,
    non_ground_hits,
    ground_hits,
    merge_hits,
    SOURCE_NON_GROUND,
    SOURCE_GROUND,
)

__all__ = [
    'SensorSpec',
    'Ray',
    'RaySet',
    'build_rays',
    'FrustumBins',
    'bin_points',
    'assign_frustums',
    'nominal_bins',
    'Plane',
    'BatchPlanes',
    'fit_plane_tls',
    'fit_planes_batched',
    'intersect_ray_plane',
    'intersect_rays_planes',
    'RayHits',
    'SynthesisResult',
    'synthesize',
    'synthesize_non_ground',
    'synthesize_ground',
    'non_ground_hits',
    'ground_hits',
    'merge_hits',
    'SOURCE_NON_GROUND',
    'SOURCE_GROUND',
]
