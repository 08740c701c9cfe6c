from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import NotARotation
from .rotation import as_vec3, is_rotation, rodrigues


class FrameTag(str, Enum):
    WORLD = "world"
    VEHICLE = "vehicle"


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """x -> rotation @ x + translation, translation in meters."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.array(self.rotation, dtype=np.float64)
        if not is_rotation(rotation):
            raise NotARotation(f"rigid transform needs a proper rotation, got {rotation.tolist()}")
        translation = as_vec3(self.translation, "translation").copy()
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points) -> np.ndarray:
        return apply_transform(self, points)

    def as_matrix(self) -> np.ndarray:
        mat = np.eye(4)
        mat[:3, :3] = self.rotation
        mat[:3, 3] = self.translation
        return mat

    def __repr__(self):
        return f"RigidTransform(rotation={self.rotation.tolist()}, translation={self.translation.tolist()})"


def world_to_vehicle_transform(x_wc, theta_wc, delta_t) -> RigidTransform:
    """Transform taking world coordinates into the target vehicle's sensor frame.

    x_wc and theta_wc are the target's annotated centroid and rotation vector in
    the world frame, delta_t the sensor mount offset from that centroid.
    R is the transpose of rodrigues(theta_wc); T = -R x_wc - delta_t.
    """
    x_wc = as_vec3(x_wc, "x_wc")
    delta_t = as_vec3(delta_t, "delta_t")
    rotation = rodrigues(theta_wc).T
    translation = -rotation @ x_wc - delta_t
    return RigidTransform(rotation, translation)


def apply_transform(t: RigidTransform, p) -> np.ndarray:
    """R p + T for a single point (3,) or an (N, 3) array."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim == 1:
        return t.rotation @ p + t.translation
    return p @ t.rotation.T + t.translation


def compose(t2: RigidTransform, t1: RigidTransform) -> RigidTransform:
    """The transform equivalent to applying t1 first, then t2."""
    return RigidTransform(t2.rotation @ t1.rotation, t2.rotation @ t1.translation + t2.translation)


def invert(t: RigidTransform) -> RigidTransform:
    rot_t = t.rotation.T
    return RigidTransform(rot_t, -rot_t @ t.translation)
