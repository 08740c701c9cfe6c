"""World -> vehicle re-expression and range gating (Q_w -> Q_c -> P_c)."""

import logging

import numpy as np

from ..annotations.boxes import points_in_box
from ..errors import WrongFrame
from ..geometry import FrameTag, RigidTransform, apply_transform, to_spherical
from .cloud import PointCloud

logger = logging.getLogger(__name__)


def transform_cloud(cloud: PointCloud, t: RigidTransform) -> PointCloud:
    if cloud.frame_tag != FrameTag.WORLD:
        raise WrongFrame(f"transform_cloud expects a world-frame cloud, '{cloud.source_id}' is {cloud.frame_tag.value}")
    return cloud.with_positions(apply_transform(t, cloud.positions), FrameTag.VEHICLE)


def range_gate_mask(spherical: np.ndarray, spec) -> np.ndarray:
    """Inclusive radial and vertical-FOV gate over (rho, phi, theta) rows.
    Azimuth is not gated: the horizontal field of view is the full circle."""
    rho, theta = spherical[:, 0], spherical[:, 2]
    return (
        (rho >= spec.min_range) & (rho <= spec.max_range)
        & (theta >= spec.theta_min) & (theta <= spec.theta_max)
    )


def range_gate(cloud: PointCloud, spec) -> PointCloud:
    if cloud.frame_tag != FrameTag.VEHICLE:
        raise WrongFrame(f"range_gate expects a vehicle-frame cloud, '{cloud.source_id}' is {cloud.frame_tag.value}")
    keep = range_gate_mask(to_spherical(cloud.positions), spec)
    logger.debug(f"Range gate kept {int(keep.sum())}/{len(cloud)} points of '{cloud.source_id}'")
    return cloud.subset(keep)


def crop_box(cloud: PointCloud, box, margin: float = 0.0) -> PointCloud:
    """Drop the points inside box (grown by margin on every side).

    Used to remove the target vehicle's own returns; box must be expressed in
    the cloud's frame.
    """
    if box.frame_tag != cloud.frame_tag:
        raise WrongFrame(f"box '{box.object_id}' is {box.frame_tag.value}, cloud is {cloud.frame_tag.value}")
    inside = points_in_box(cloud.positions, box, margin)
    return cloud.subset(~inside)


def cloud_bounds(cloud: PointCloud):
    """(min xyz, max xyz) or (None, None) for an empty cloud."""
    if len(cloud) == 0:
        return None, None
    return cloud.positions.min(axis=0), cloud.positions.max(axis=0)
