"""Cartesian <-> spherical conversion.

Angles are degrees at this boundary. phi is the azimuth in [0, 360) measured
counter-clockwise from +x, theta the polar angle from +z, so theta = 90 is the
horizontal plane.
"""

from typing import NamedTuple

import numpy as np

from ..errors import DegenerateOrigin
from .rotation import as_vec3

ORIGIN_EPS = 1e-12


class SphericalPoint(NamedTuple):
    rho: float
    phi: float
    theta: float


def _wrap_degrees(phi: np.ndarray) -> np.ndarray:
    phi = np.mod(phi, 360.0)
    # mod of a tiny negative number rounds up to exactly 360
    return np.where(phi >= 360.0, phi - 360.0, phi)


def to_spherical(points) -> np.ndarray:
    """(N, 3) cartesian -> (N, 3) columns (rho, phi, theta). Points at the
    origin get rho 0 and both angles 0 rather than raising."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    horizontal = np.hypot(x, y)
    rho = np.hypot(horizontal, z)
    phi = _wrap_degrees(np.degrees(np.arctan2(y, x)))
    theta = np.degrees(np.arctan2(horizontal, z))
    return np.column_stack((rho, phi, theta))


def from_spherical(spherical) -> np.ndarray:
    spherical = np.asarray(spherical, dtype=np.float64).reshape(-1, 3)
    rho = spherical[:, 0]
    phi = np.radians(spherical[:, 1])
    theta = np.radians(spherical[:, 2])
    sin_theta = np.sin(theta)
    return np.column_stack((
        rho * sin_theta * np.cos(phi),
        rho * sin_theta * np.sin(phi),
        rho * np.cos(theta),
    ))


def cartesian_to_spherical(p) -> SphericalPoint:
    p = as_vec3(p, "point")
    if np.linalg.norm(p) < ORIGIN_EPS:
        raise DegenerateOrigin(f"point {p.tolist()} is at the origin; spherical angles are undefined")
    rho, phi, theta = to_spherical(p)[0]
    return SphericalPoint(float(rho), float(phi), float(theta))


def spherical_to_cartesian(s) -> np.ndarray:
    return from_spherical(np.asarray(tuple(s), dtype=np.float64))[0]


def direction_from_angles(phi_deg, theta_deg) -> np.ndarray:
    """Unit vectors for azimuth/polar angle pairs (degrees), shape (N, 3)."""
    phi_deg, theta_deg = np.broadcast_arrays(
        np.atleast_1d(np.asarray(phi_deg, dtype=np.float64)),
        np.atleast_1d(np.asarray(theta_deg, dtype=np.float64)),
    )
    ones = np.ones(phi_deg.size)
    return from_spherical(np.column_stack((ones, phi_deg.ravel(), theta_deg.ravel())))
