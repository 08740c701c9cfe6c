"""Synthetic scenes with known geometry.

Used by the tests, scripts/make_toy_scene.py and the throughput benchmark.
Everything is deterministic for a given seed.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..annotations import BoxAnnotation, points_in_box, write_labels
from ..geometry import FrameTag, direction_from_angles, rodrigues
from ..pointcloud import PointCloud, write_kitti_bin
from ..segmentation import write_ground_sidecar

VEHICLE_DIMENSIONS = {
    'Car': (4.5, 1.9, 1.6),
    'Van': (5.2, 2.0, 2.2),
    'Truck': (8.5, 2.5, 3.2),
    'Bus': (11.0, 2.6, 3.1),
    'Pedestrian': (0.6, 0.6, 1.75),
    'Cyclist': (1.8, 0.6, 1.7),
}


def _axis_samples(length: float, spacing: float) -> np.ndarray:
    return np.linspace(-length / 2.0, length / 2.0, max(int(math.ceil(length / spacing)) + 1, 2))


def flat_ground(extent: float, spacing: float, z: float = 0.0) -> np.ndarray:
    """Square grid of points on z = const covering [-extent, extent]^2."""
    axis = np.arange(-extent, extent + spacing / 2.0, spacing)
    xx, yy = np.meshgrid(axis, axis, indexing='ij')
    return np.column_stack((xx.ravel(), yy.ravel(), np.full(xx.size, z)))


def vertical_wall(start, end, z_min: float, z_max: float, spacing: float) -> np.ndarray:
    start = np.asarray(start, dtype=np.float64)
    end = np.asarray(end, dtype=np.float64)
    length = float(np.linalg.norm(end - start))
    s = np.linspace(0.0, 1.0, max(int(math.ceil(length / spacing)) + 1, 2))
    z = np.linspace(z_min, z_max, max(int(math.ceil((z_max - z_min) / spacing)) + 1, 2))
    ss, zz = np.meshgrid(s, z, indexing='ij')
    xy = start + ss.ravel()[:, None] * (end - start)
    return np.column_stack((xy, zz.ravel()))


def box_surface(box: BoxAnnotation, spacing: float, bottom: bool = False) -> np.ndarray:
    """Points on the faces of an oriented box, in the box's frame."""
    l, w, h = box.dimensions
    xs, ys, zs = _axis_samples(l, spacing), _axis_samples(w, spacing), _axis_samples(h, spacing)
    faces = []
    for x in (-l / 2.0, l / 2.0):
        yy, zz = np.meshgrid(ys, zs, indexing='ij')
        faces.append(np.column_stack((np.full(yy.size, x), yy.ravel(), zz.ravel())))
    for y in (-w / 2.0, w / 2.0):
        xx, zz = np.meshgrid(xs, zs, indexing='ij')
        faces.append(np.column_stack((xx.ravel(), np.full(xx.size, y), zz.ravel())))
    for z in ((-h / 2.0, h / 2.0) if bottom else (h / 2.0,)):
        xx, yy = np.meshgrid(xs, ys, indexing='ij')
        faces.append(np.column_stack((xx.ravel(), yy.ravel(), np.full(xx.size, z))))
    local = np.unique(np.vstack(faces), axis=0)
    return local @ box.rotation_matrix.T + box.centroid


def vehicle_box(object_id: str, x: float, y: float, yaw: float = 0.0, category: str = 'Car',
                ground_z: float = 0.0, dimensions=None) -> BoxAnnotation:
    """Box standing on z = ground_z, heading yaw radians about +z."""
    dims = np.asarray(dimensions if dimensions is not None else VEHICLE_DIMENSIONS[category], dtype=np.float64)
    return BoxAnnotation(
        object_id=object_id,
        category=category,
        dimensions=dims,
        centroid=(x, y, ground_z + dims[2] / 2.0),
        rotation=(0.0, 0.0, yaw),
    )


# ----------------------------------------------------------------------
# Planar scene seen from a sensor at the origin
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Patch:
    """Planar rectangle corner + s * u + t * v, s and t in [0, 1]."""

    name: str
    corner: Tuple[float, float, float]
    u: Tuple[float, float, float]
    v: Tuple[float, float, float]
    ground: bool = False

    @property
    def normal(self) -> np.ndarray:
        n = np.cross(self.u, self.v)
        return n / np.linalg.norm(n)

    @property
    def offset(self) -> float:
        return float(self.normal @ np.asarray(self.corner))

    def distance(self, points) -> np.ndarray:
        return np.asarray(points, dtype=np.float64).reshape(-1, 3) @ self.normal - self.offset

    def intersect(self, directions: np.ndarray) -> np.ndarray:
        """Range along each unit direction from the origin, inf on a miss."""
        n = self.normal
        denom = directions @ n
        with np.errstate(divide='ignore', invalid='ignore'):
            t = np.where(np.abs(denom) > 1e-12, self.offset / denom, np.inf)
        t = np.where(t > 0, t, np.inf)
        hit = directions * np.where(np.isfinite(t), t, 0.0)[:, None] - np.asarray(self.corner)
        u, v = np.asarray(self.u), np.asarray(self.v)
        s = hit @ u / (u @ u)
        r = hit @ v / (v @ v)
        inside = (s >= 0) & (s <= 1) & (r >= 0) & (r <= 1)
        return np.where(inside, t, np.inf)


def planar_patches(ground_z: float = -2.0) -> List[Patch]:
    """Ground z = ground_z plus two walls, x = 10 and y = -8, that do not meet."""
    top = 3.0
    height = top - ground_z
    return [
        Patch('ground', (-150.0, -150.0, ground_z), (300.0, 0.0, 0.0), (0.0, 300.0, 0.0), ground=True),
        Patch('wall_x', (10.0, -5.0, ground_z), (0.0, 10.0, 0.0), (0.0, 0.0, height)),
        Patch('wall_y', (-20.0, -8.0, ground_z), (20.0, 0.0, 0.0), (0.0, 0.0, height)),
    ]


@dataclass(frozen=True, eq=False)
class PlanarScene:
    points: np.ndarray
    patch_ids: np.ndarray
    patches: List[Patch]

    @property
    def ground_mask(self) -> np.ndarray:
        return np.array([self.patches[p].ground for p in self.patch_ids], dtype=bool)

    def cloud(self, frame_tag: FrameTag = FrameTag.VEHICLE) -> PointCloud:
        return PointCloud.from_xyz(self.points, frame_tag, source_id='planar')

    def residuals(self, points) -> np.ndarray:
        """Distance of each point to the nearest patch plane."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if not len(points):
            return np.zeros(0)
        return np.min(np.abs(np.column_stack([p.distance(points) for p in self.patches])), axis=1)


def raycast(patches: Sequence[Patch], directions: np.ndarray, max_range: float = np.inf):
    """Nearest patch hit along each direction: (ranges, patch ids); misses
    get range inf and id -1."""
    ranges = np.column_stack([p.intersect(directions) for p in patches])
    nearest = np.argmin(ranges, axis=1)
    best = ranges[np.arange(len(directions)), nearest]
    hit = best <= max_range
    return np.where(hit, best, np.inf), np.where(hit, nearest, -1)


def planar_scene(spec, oversample: int = 2, noise: float = 0.0, seed: int = 0,
                 patches: Optional[List[Patch]] = None) -> PlanarScene:
    """Points on the planar patches as seen from the origin, sampled at
    oversample times the angular density of spec and a little beyond its
    vertical field of view."""
    patches = patches if patches is not None else planar_patches()
    d_phi = 360.0 / (spec.m * oversample)
    d_theta = spec.vertical_resolution / oversample
    phi = np.arange(spec.m * oversample) * d_phi
    theta = np.arange(spec.theta_min - 2 * spec.vertical_resolution,
                      spec.theta_max + 2 * spec.vertical_resolution, d_theta)
    pp, tt = np.meshgrid(phi, theta, indexing='ij')
    directions = direction_from_angles(pp.ravel(), tt.ravel())

    ranges, ids = raycast(patches, directions, max_range=spec.max_range * 1.2)
    hit = ids >= 0
    points = directions[hit] * ranges[hit, None]
    if noise > 0:
        points = points + np.random.default_rng(seed).normal(0.0, noise, points.shape)
    return PlanarScene(points, ids[hit], list(patches))


# ----------------------------------------------------------------------
# Roadside frames
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RoadsideFrame:
    """A fused world-frame roadside frame with its labels and exact
    ground flags."""

    cloud: PointCloud
    labels: List[BoxAnnotation]
    ground_mask: np.ndarray
    vehicle_ids: List[str] = field(default_factory=list)

    def write(self, directory, frame_id: str) -> Path:
        """<dir>/<frame_id>.bin, <dir>/labels/<frame_id>.txt and
        <dir>/ground/<frame_id>.bin."""
        directory = Path(directory)
        cloud_path = directory / f"{frame_id}.bin"
        write_kitti_bin(self.cloud, cloud_path)
        write_labels(self.labels, directory / "labels" / f"{frame_id}.txt")
        write_ground_sidecar(self.ground_mask, directory / "ground" / f"{frame_id}.bin")
        return cloud_path


def _place(rng, n: int, extent: float, min_gap: float, placed: List[np.ndarray]) -> List[np.ndarray]:
    spots = []
    attempts = 0
    while len(spots) < n:
        attempts += 1
        if attempts > 10000:
            raise ValueError(f"could not place {n} objects in a {2 * extent:g} m square")
        xy = rng.uniform(-extent, extent, 2)
        if all(np.linalg.norm(xy - q) >= min_gap for q in placed + spots):
            spots.append(xy)
    return spots


def roadside_frame(n_vehicles: int = 4, n_pedestrians: int = 1, seed: int = 0, extent: float = 40.0,
                   ground_spacing: float = 0.25, surface_spacing: float = 0.1, ground_z: float = 0.0,
                   categories: Sequence[str] = ('Car', 'Car', 'Car', 'Van', 'Truck')) -> RoadsideFrame:
    """Flat ground with n_vehicles vehicle boxes and n_pedestrians
    pedestrian boxes on it. Ground under each box is removed, as a roadside
    sensor cannot see it."""
    rng = np.random.default_rng(seed)
    inner = extent - 10.0
    vehicle_spots = _place(rng, n_vehicles, inner, 9.0, [])
    pedestrian_spots = _place(rng, n_pedestrians, inner, 3.0, vehicle_spots)

    labels = []
    for k, xy in enumerate(vehicle_spots):
        category = categories[int(rng.integers(len(categories)))]
        yaw = float(rng.uniform(-math.pi, math.pi))
        labels.append(vehicle_box(f"veh_{k:02d}", xy[0], xy[1], yaw, category, ground_z))
    for k, xy in enumerate(pedestrian_spots):
        labels.append(vehicle_box(f"ped_{k:02d}", xy[0], xy[1], 0.0, 'Pedestrian', ground_z))

    ground = flat_ground(extent, ground_spacing, ground_z)
    covered = np.zeros(len(ground), dtype=bool)
    for box in labels:
        covered |= points_in_box(ground, box, margin=0.05)
    ground = ground[~covered]

    # wheel clearance: nothing is sampled in the lowest 0.2 m of a box
    objects = [pts[pts[:, 2] >= ground_z + 0.2] for pts in (box_surface(box, surface_spacing) for box in labels)]
    positions = np.vstack([ground] + objects)
    ground_mask = np.zeros(len(positions), dtype=bool)
    ground_mask[:len(ground)] = True
    intensity = np.where(ground_mask, 0.1, 0.6)

    cloud = PointCloud(positions, intensity, FrameTag.WORLD, source_id=f"roadside_{seed}")
    vehicle_ids = [box.object_id for box in labels if box.category != 'Pedestrian']
    return RoadsideFrame(cloud, labels, ground_mask, vehicle_ids)
