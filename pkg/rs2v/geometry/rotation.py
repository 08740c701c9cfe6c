"""Rodrigues conversions between rotation vectors and rotation matrices.

Rotation vectors are axis-angle 3-vectors in radians. The heavy lifting is
done by ``scipy.spatial.transform.Rotation``, which already switches to a
series expansion for tiny angles; this module adds validation and fixes the
axis sign convention at a rotation angle of exactly pi.
"""

import numpy as np
from scipy.spatial.transform import Rotation

from ..errors import NotARotation

ROTATION_TOL = 1e-9
# rotation vectors this close to pi get the canonical axis sign
PI_SNAP_TOL = 1e-10


def as_vec3(value, name: str = "vector") -> np.ndarray:
    vec = np.asarray(value, dtype=np.float64)
    if vec.shape != (3,):
        vec = vec.reshape(-1)
        if vec.shape != (3,):
            raise ValueError(f"{name} must have 3 components, got shape {np.shape(value)}")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{name} must be finite, got {vec}")
    return vec


def is_rotation(rot, tol: float = ROTATION_TOL) -> bool:
    rot = np.asarray(rot, dtype=np.float64)
    if rot.shape != (3, 3) or not np.all(np.isfinite(rot)):
        return False
    if np.max(np.abs(rot.T @ rot - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(rot) - 1.0) <= tol


def rodrigues(theta) -> np.ndarray:
    """Rotation vector (radians) -> 3x3 rotation matrix, exp of skew(theta)."""
    theta = as_vec3(theta, "rotation vector")
    return Rotation.from_rotvec(np.array(theta)).as_matrix()


def canonical_rotvec(rotvec: np.ndarray) -> np.ndarray:
    """At angle pi, +axis and -axis are the same rotation; keep the one whose
    first nonzero component is positive."""
    rotvec = np.asarray(rotvec, dtype=np.float64)
    angle = np.linalg.norm(rotvec)
    if np.pi - angle > PI_SNAP_TOL:
        return rotvec
    for component in rotvec:
        if abs(component) > 1e-12 * max(angle, 1.0):
            return -rotvec if component < 0 else rotvec
    return rotvec


def inv_rodrigues(rot) -> np.ndarray:
    """3x3 rotation matrix -> rotation vector with magnitude in [0, pi]."""
    rot = np.asarray(rot, dtype=np.float64)
    if not is_rotation(rot):
        raise NotARotation(f"matrix is not a proper rotation within {ROTATION_TOL}: {rot.tolist()}")
    rotvec = Rotation.from_matrix(np.array(rot)).as_rotvec()
    return canonical_rotvec(rotvec)
