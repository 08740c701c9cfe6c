from .rotation import rodrigues, inv_rodrigues, is_rotation, canonical_rotvec, as_vec3
from .transforms import FrameTag, RigidTransform, world_to_vehicle_transform, apply_transform, compose, invert
from .spherical import (
    SphericalPoint,
    cartesian_to_spherical,
    spherical_to_cartesian,
    to_spherical,
    from_spherical,
    direction_from_angles,
)

__all__ = [
    'rodrigues',
    'inv_rodrigues',
    'is_rotation',
    'canonical_rotvec',
    'as_vec3',
    'FrameTag',
    'RigidTransform',
    'world_to_vehicle_transform',
    'apply_transform',
    'compose',
    'invert',
    'SphericalPoint',
    'cartesian_to_spherical',
    'spherical_to_cartesian',
    'to_spherical',
    'from_spherical',
    'direction_from_angles',
]
