"""Batch runs over a directory of roadside frames."""

import logging
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, as_completed, wait
from pathlib import Path
from typing import List, Optional

from tqdm import tqdm

from ..errors import Rs2vError
from ..virtual_lidar import RaySet, build_rays
from .frame import FrameSource, LoadedFrame, generate_frame, generate_scene_targets, load_frame
from .manifest import MANIFEST_NAME, FrameManifest, write_manifest
from .schemas import JobConfig, ManifestRow

logger = logging.getLogger(__name__)

CLOUD_SUFFIXES = ('.bin', '.txt', '.xyz', '.asc')
FRAME_FAILURE_ID = "*"


def _sidecar_for(frame_id: str, cloud_path: Path, cfg: JobConfig) -> Optional[Path]:
    if cfg.ground_sidecar:
        sidecar = Path(cfg.ground_sidecar)
        return sidecar / f"{frame_id}.bin" if sidecar.is_dir() else sidecar
    default = cloud_path.parent / "ground" / f"{frame_id}.bin"
    return default if default.exists() else None


def discover_frames(cfg: JobConfig) -> List[FrameSource]:
    """Frames named by cfg.input_cloud_path, sorted by frame id.

    A file is one frame; its labels are cfg.labels_path, or
    <dir>/labels/<frame_id>.txt. A directory holds <frame_id>.bin (or ASCII)
    clouds with labels in cfg.labels_path when that is a directory, else
    <input>/labels.
    """
    root = Path(cfg.input_cloud_path)
    if not root.exists():
        raise FileNotFoundError(f"input not found: {root}")

    labels = Path(cfg.labels_path) if cfg.labels_path else None
    if root.is_file():
        frame_id = root.stem
        labels_path = labels if labels and not labels.is_dir() else (labels or root.parent / "labels") / f"{frame_id}.txt"
        return [FrameSource(frame_id, root, labels_path, _sidecar_for(frame_id, root, cfg))]

    labels_dir = labels if labels else root / "labels"
    sources = []
    for path in sorted(p for p in root.iterdir() if p.is_file() and p.suffix.lower() in CLOUD_SUFFIXES):
        frame_id = path.stem
        sources.append(FrameSource(frame_id, path, labels_dir / f"{frame_id}.txt", _sidecar_for(frame_id, path, cfg)))
    ids = [s.frame_id for s in sources]
    if len(set(ids)) != len(ids):
        raise Rs2vError(f"{root} holds several clouds with the same frame id")
    return sources


def _failure(frame_id: str, object_id: str, error: Exception, started: float) -> ManifestRow:
    return ManifestRow(
        frame_id=frame_id,
        object_id=object_id,
        status="failed",
        error=f"{type(error).__name__}: {error}",
        duration_s=time.perf_counter() - started,
    )


def run_target(cfg: JobConfig, frame: LoadedFrame, target_id: str, rays: RaySet) -> ManifestRow:
    """generate_frame with per-target error capture; never raises for data errors."""
    started = time.perf_counter()
    try:
        return generate_frame(cfg, target_id, frame, rays).row
    except (Rs2vError, OSError, ValueError) as e:
        logger.error(f"Frame '{frame.frame_id}' target '{target_id}' failed: {e}")
        return _failure(frame.frame_id, target_id, e, started)


def run_batch(cfg: JobConfig, manifest_path=None) -> FrameManifest:
    """Every (frame, target) output of the job, plus one row per failure.

    Frames are loaded one at a time and their targets handed to a thread
    pool; at most a few frames are held in memory at once. The manifest is
    written once, sorted by (frame_id, object_id).
    """
    manifest = FrameManifest()
    sources = discover_frames(cfg)
    rays = build_rays(cfg.sensor)
    max_pending = 4 * cfg.threads
    logger.info(f"Batch over {len(sources)} frames with {cfg.threads} thread(s), output in {cfg.output_dir}")

    progress = tqdm(total=0, unit="output", disable=not cfg.progress, desc="rs2v")
    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        pending = set()

        def collect(done):
            for future in done:
                manifest.add(future.result())
                progress.update(1)

        for source in sources:
            started = time.perf_counter()
            try:
                frame = load_frame(source, cfg)
            except (Rs2vError, OSError, ValueError) as e:
                logger.error(f"Frame '{source.frame_id}' could not be loaded: {e}")
                manifest.add(_failure(source.frame_id, FRAME_FAILURE_ID, e, started))
                continue

            targets = generate_scene_targets(frame.labels, cfg)
            if not targets:
                logger.warning(f"Frame '{source.frame_id}' has no targets")
            progress.total += len(targets)
            progress.refresh()
            for target_id in targets:
                pending.add(executor.submit(run_target, cfg, frame, target_id, rays))
            if len(pending) >= max_pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                collect(done)

        collect(as_completed(pending))
    progress.close()

    path = Path(manifest_path) if manifest_path else Path(cfg.output_dir) / MANIFEST_NAME
    write_manifest(manifest, path)
    logger.info(
        f"Batch done: {len(manifest.succeeded)} outputs, {len(manifest.failed)} failures, manifest {path}"
    )
    return manifest
