"""Resimulation of one roadside frame from the viewpoint of one target vehicle."""

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from ..annotations import (
    BoxAnnotation,
    count_points_in_boxes,
    find_box,
    read_labels,
    select_target,
    select_vehicle_ids,
    transform_annotations,
    write_kitti_labels,
    write_labels,
)
from ..geometry import world_to_vehicle_transform
from ..pointcloud import PointCloud, crop_box, range_gate, read_cloud, transform_cloud, write_kitti_bin
from ..segmentation import GroundSegmenter, get_segmenter
from ..virtual_lidar import RaySet, SynthesisResult, build_rays, synthesize
from .schemas import ALL_VEHICLES, JobConfig, ManifestRow

logger = logging.getLogger(__name__)

CLOUD_DIR = "velodyne"
LABEL_DIR = "labels"
KITTI_LABEL_DIR = "label_2"


@dataclass(frozen=True)
class FrameSource:
    """Where one roadside frame lives on disk."""

    frame_id: str
    cloud_path: Path
    labels_path: Path
    sidecar_path: Optional[Path] = None


@dataclass(frozen=True, eq=False)
class LoadedFrame:
    frame_id: str
    cloud: PointCloud
    labels: List[BoxAnnotation]
    segmenter: GroundSegmenter


@dataclass(frozen=True, eq=False)
class FrameOutput:
    cloud: PointCloud
    labels: List[BoxAnnotation]
    row: ManifestRow
    synthesis: SynthesisResult


def output_name(frame_id: str, object_id: str) -> str:
    return f"{frame_id}_{object_id}"


def load_frame(source: FrameSource, cfg: JobConfig) -> LoadedFrame:
    cloud = read_cloud(source.cloud_path, source_id=source.frame_id)
    labels = read_labels(source.labels_path)
    sidecar = None
    if cfg.segmenter_backend == "precomputed":
        if source.sidecar_path is None:
            raise FileNotFoundError(f"no ground sidecar for frame '{source.frame_id}'")
        sidecar = source.sidecar_path
    segmenter = get_segmenter(cfg.segmenter, sidecar_path=sidecar)
    logger.debug(f"Loaded frame '{source.frame_id}': {len(cloud)} points, {len(labels)} labels")
    return LoadedFrame(source.frame_id, cloud, labels, segmenter)


def generate_scene_targets(labels: List[BoxAnnotation], cfg: JobConfig) -> List[str]:
    """Target ids for one frame, sorted. An explicit id list is returned as
    given (sorted); unknown ids fail later, per target."""
    if cfg.target_ids == ALL_VEHICLES:
        return select_vehicle_ids(labels, cfg.vehicle_categories)
    return sorted(cfg.target_ids)


def generate_frame(cfg: JobConfig, target_id: str, frame: LoadedFrame,
                   rays: Optional[RaySet] = None, write: bool = True) -> FrameOutput:
    """Resample frame as the target vehicle's own sensor would have seen it.

    select target -> world-to-vehicle transform -> transform cloud and all
    boxes -> drop the target's own points -> range gate -> ground
    segmentation -> synthesis. With write=True the cloud goes to
    <output_dir>/velodyne/<frame_id>_<object_id>.bin and the labels next to
    it.
    """
    started = time.perf_counter()
    x_wc, theta_wc = select_target(frame.labels, target_id)
    t = world_to_vehicle_transform(x_wc, theta_wc, cfg.delta_t)

    scene = transform_cloud(frame.cloud, t)
    boxes = transform_annotations(frame.labels, t)
    if cfg.remove_ego_points:
        scene = crop_box(scene, find_box(boxes, target_id), cfg.ego_margin)
    gated = range_gate(scene, cfg.sensor)

    segmentation = frame.segmenter.segment(gated)
    result = synthesize(gated, segmentation, cfg.sensor, rays)
    for warning in result.warnings:
        logger.warning(f"Frame '{frame.frame_id}' target '{target_id}': {warning}")

    others = [b for b in boxes if b.object_id != target_id]
    counts = count_points_in_boxes(result.cloud, others)
    labels = [b for b, n in zip(others, counts) if n >= cfg.min_points_per_box]

    name = output_name(frame.frame_id, target_id)
    output_path = ""
    if write:
        out = Path(cfg.output_dir)
        cloud_path = out / CLOUD_DIR / f"{name}.bin"
        write_kitti_bin(result.cloud, cloud_path)
        write_labels(labels, out / LABEL_DIR / f"{name}.txt")
        if cfg.emit_kitti_labels:
            write_kitti_labels(labels, out / KITTI_LABEL_DIR / f"{name}.txt")
        output_path = str(cloud_path)

    a, b, c, d = result.ground_plane.coefficients() if result.ground_plane is not None else (None,) * 4
    duration = time.perf_counter() - started
    row = ManifestRow(
        frame_id=frame.frame_id,
        object_id=target_id,
        status="ok",
        n_pc=len(gated),
        n_pcn=len(segmentation.non_ground),
        n_pcg=len(segmentation.ground),
        n_vn=len(result.non_ground),
        n_vg=len(result.ground),
        n_v=len(result.cloud),
        n_labels=len(labels),
        ground_a=a,
        ground_b=b,
        ground_c=c,
        ground_d=d,
        output_path=output_path,
        duration_s=duration,
    )
    logger.info(
        f"Generated '{name}': {row.n_v} points ({row.n_vn} non-ground, {row.n_vg} ground) "
        f"from {row.n_pc}, {row.n_labels} labels in {duration:.2f}s"
    )
    return FrameOutput(result.cloud, labels, row, result)
