"""Baseline ground segmenter on a concentric polar grid around the sensor.

Each cell seeds a plane from its lowest points, refines it by re-admitting
points close to the plane, and is rejected when the plane is too steep or sits
well above the ground found in the other cells. Points of cells that cannot
be fitted are tested against the plane of the nearest ground cell.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from ..errors import DegenerateGeometry, EmptyInput
from ..pointcloud import PointCloud
from ..virtual_lidar.planes import Plane, fit_plane_tls
from .base import GroundSegmenter, SegmentationResult
from .schemas import GroundSegmenterConfig

logger = logging.getLogger(__name__)


def polar_cell_ids(positions: np.ndarray, cfg: GroundSegmenterConfig) -> np.ndarray:
    n_rings = max(1, math.ceil(cfg.max_range / cfg.cell_size))
    n_sectors = max(1, math.ceil(360.0 / cfg.sector_deg))
    radius = np.hypot(positions[:, 0], positions[:, 1])
    azimuth = np.mod(np.degrees(np.arctan2(positions[:, 1], positions[:, 0])), 360.0)
    ring = np.minimum((radius / cfg.cell_size).astype(np.int64), n_rings - 1)
    sector = np.minimum((azimuth / cfg.sector_deg).astype(np.int64), n_sectors - 1)
    return ring * n_sectors + sector


def fit_cell(points: np.ndarray, cfg: GroundSegmenterConfig):
    """(ground mask, plane) for the points of one cell; plane is None when the
    cell holds no acceptable ground."""
    none = np.zeros(points.shape[0], dtype=bool)
    if points.shape[0] < 3:
        return none, None
    z = points[:, 2]
    seeds = points[z <= z.min() + cfg.seed_height_margin]
    try:
        plane = fit_plane_tls(seeds)
        mask = none
        for _ in range(cfg.refinement_iterations):
            mask = np.abs(plane.distance(points)) <= cfg.max_plane_distance
            if mask.sum() < 3:
                return none, None
            plane = fit_plane_tls(points[mask])
        mask = np.abs(plane.distance(points)) <= cfg.max_plane_distance
    except DegenerateGeometry:
        return none, None

    tilt = math.degrees(math.acos(min(1.0, abs(float(plane.normal[2])))))
    if tilt > cfg.max_slope:
        return none, None
    return mask, plane


class PolarGridSegmenter(GroundSegmenter):

    def __init__(self, config: Optional[GroundSegmenterConfig] = None):
        self.config = config or GroundSegmenterConfig()

    def ground_mask(self, cloud: PointCloud) -> np.ndarray:
        cfg = self.config
        n = len(cloud)
        if n == 0:
            if cfg.strict:
                raise EmptyInput(f"cloud '{cloud.source_id}' is empty")
            return np.zeros(0, dtype=bool)

        positions = cloud.positions
        cells = polar_cell_ids(positions, cfg)
        order = np.argsort(cells, kind='stable')
        uniq, starts = np.unique(cells[order], return_index=True)

        # cells are independent; results are gathered in cell id order
        candidates = []
        unfit = []
        for members in np.split(order, starts[1:]):
            mask, plane = fit_cell(positions[members], cfg)
            if plane is None:
                unfit.append(members)
                continue
            height = float(positions[members[mask], 2].mean())
            candidates.append((members[mask], plane, height))

        ground = np.zeros(n, dtype=bool)
        if not candidates:
            logger.warning(f"No ground cells found in '{cloud.source_id}' ({n} points, {uniq.size} cells)")
            return ground
        reference = float(np.median([h for _, _, h in candidates]))
        accepted = []
        for members, plane, height in candidates:
            if height > reference + cfg.elevation_margin:
                continue
            ground[members] = True
            accepted.append((positions[members, :2].mean(axis=0), plane))

        rescued = self._adopt_neighbour_ground(positions, unfit, accepted, ground)
        rejected = len(candidates) - len(accepted)
        logger.debug(
            f"Ground segmentation of '{cloud.source_id}': {int(ground.sum())}/{n} ground points, "
            f"{len(accepted)}/{uniq.size} ground cells, {rejected} rejected by elevation, "
            f"{rescued} points from unfit cells"
        )
        return ground

    def _adopt_neighbour_ground(self, positions, unfit, accepted, ground) -> int:
        """Points of cells too sparse or too steep to fit are ground when they
        lie on the plane of the nearest accepted ground cell."""
        if not unfit or not accepted:
            return 0
        idx = np.concatenate(unfit)
        tree = cKDTree(np.array([centre for centre, _ in accepted]))
        _, nearest = tree.query(positions[idx, :2])
        normals = np.array([plane.normal for _, plane in accepted])
        offsets = np.array([plane.offset for _, plane in accepted])
        dist = np.einsum('ij,ij->i', positions[idx], normals[nearest]) - offsets[nearest]
        on_plane = idx[np.abs(dist) <= self.config.max_plane_distance]
        ground[on_plane] = True
        return int(on_plane.size)


def segment_ground(cloud: PointCloud, cfg: Optional[GroundSegmenterConfig] = None) -> SegmentationResult:
    return PolarGridSegmenter(cfg).segment(cloud)
