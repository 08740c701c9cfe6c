from dataclasses import dataclass, replace
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..errors import DuplicateTarget, UnknownTarget, WrongFrame
from ..geometry import FrameTag, RigidTransform, apply_transform, as_vec3, inv_rodrigues, rodrigues

DEFAULT_VEHICLE_CATEGORIES = ('Car', 'Van', 'Truck', 'Bus')


@dataclass(frozen=True, eq=False)
class BoxAnnotation:
    """Oriented 3D box. dimensions are (length, width, height) along the box's
    local x, y, z axes; rotation is the axis-angle vector taking local axes to
    the frame named by frame_tag."""

    object_id: str
    category: str
    dimensions: np.ndarray
    centroid: np.ndarray
    rotation: np.ndarray
    frame_tag: FrameTag = FrameTag.WORLD

    def __post_init__(self):
        dims = as_vec3(self.dimensions, "dimensions").copy()
        if np.any(dims <= 0):
            raise ValueError(f"box '{self.object_id}' has non-positive dimensions {dims.tolist()}")
        centroid = as_vec3(self.centroid, "centroid").copy()
        rotation = as_vec3(self.rotation, "rotation").copy()
        for arr in (dims, centroid, rotation):
            arr.setflags(write=False)
        object.__setattr__(self, "dimensions", dims)
        object.__setattr__(self, "centroid", centroid)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "frame_tag", FrameTag(self.frame_tag))

    @property
    def rotation_matrix(self) -> np.ndarray:
        return rodrigues(self.rotation)

    def __repr__(self):
        return (f"BoxAnnotation(object_id={self.object_id!r}, category={self.category!r}, "
                f"centroid={self.centroid.tolist()}, frame={self.frame_tag.value})")


def transform_annotation(box: BoxAnnotation, t: RigidTransform) -> BoxAnnotation:
    """Re-express a world-frame box in the frame of t.

    Category, dimensions and id are carried over unchanged.
    """
    if box.frame_tag != FrameTag.WORLD:
        raise WrongFrame(f"box '{box.object_id}' is already in the {box.frame_tag.value} frame")
    return replace(
        box,
        centroid=apply_transform(t, box.centroid),
        rotation=inv_rodrigues(t.rotation @ rodrigues(box.rotation)),
        frame_tag=FrameTag.VEHICLE,
    )


def transform_annotations(boxes: Iterable[BoxAnnotation], t: RigidTransform) -> List[BoxAnnotation]:
    return [transform_annotation(b, t) for b in boxes]


def find_box(labels: Sequence[BoxAnnotation], object_id: str) -> BoxAnnotation:
    matches = [b for b in labels if b.object_id == object_id]
    if not matches:
        raise UnknownTarget(f"object id '{object_id}' not found among {len(labels)} labels")
    if len(matches) > 1:
        raise DuplicateTarget(f"object id '{object_id}' appears {len(matches)} times")
    return matches[0]


def select_target(labels: Sequence[BoxAnnotation], object_id: str) -> Tuple[np.ndarray, np.ndarray]:
    """(X_wc, theta_wc) of the box with the given id."""
    box = find_box(labels, object_id)
    return box.centroid.copy(), box.rotation.copy()


def select_vehicle_ids(labels: Iterable[BoxAnnotation], categories=DEFAULT_VEHICLE_CATEGORIES) -> List[str]:
    wanted = {c.lower() for c in categories}
    return sorted({b.object_id for b in labels if b.category.lower() in wanted})


def points_in_box(points, box: BoxAnnotation, margin: float = 0.0) -> np.ndarray:
    """Boolean mask of the (N, 3) points inside box grown by margin."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    # row form of R^T (p - c)
    local = (points - box.centroid) @ box.rotation_matrix
    half = box.dimensions / 2.0 + margin
    return np.all(np.abs(local) <= half, axis=1)


def count_points_in_boxes(cloud, boxes: Sequence[BoxAnnotation]) -> List[int]:
    for box in boxes:
        if box.frame_tag != cloud.frame_tag:
            raise WrongFrame(f"box '{box.object_id}' is {box.frame_tag.value}, cloud is {cloud.frame_tag.value}")
    return [int(points_in_box(cloud.positions, box).sum()) for box in boxes]


def box_yaw(box: BoxAnnotation) -> float:
    """Heading of the box's local +x axis in the xy plane, radians in [-pi, pi).

    Equals the z component of the rotation vector for boxes rotated only
    about z.
    """
    heading = box.rotation_matrix[:, 0]
    return wrap_angle(float(np.arctan2(heading[1], heading[0])))


def wrap_angle(angle: float) -> float:
    return (angle + np.pi) % (2.0 * np.pi) - np.pi
