"""KITTI velodyne binary and ASCII point list readers/writers.

Binary: little-endian float32 (x, y, z, intensity) per point, no header.
ASCII: one "x y z intensity" line per point, UTF-8, LF.
"""

import logging
from pathlib import Path

import numpy as np

from ..errors import ParseError, TruncatedRecord
from ..geometry import FrameTag
from .cloud import PointCloud

logger = logging.getLogger(__name__)

RECORD_DTYPE = np.dtype("<f4")
RECORD_BYTES = 4 * RECORD_DTYPE.itemsize
ASCII_SUFFIXES = ('.txt', '.xyz', '.asc')


def read_kitti_bin(path, frame_tag: FrameTag = FrameTag.WORLD, source_id: str = None) -> PointCloud:
    path = Path(path)
    data = path.read_bytes()
    if len(data) % RECORD_BYTES:
        raise TruncatedRecord(
            f"{path}: {len(data)} bytes is not a multiple of the {RECORD_BYTES}-byte point record"
        )
    records = np.frombuffer(data, dtype=RECORD_DTYPE).reshape(-1, 4)
    return PointCloud(
        records[:, :3].astype(np.float64),
        records[:, 3].astype(np.float64),
        frame_tag,
        path.stem if source_id is None else source_id,
    )


def encode_kitti_bin(cloud: PointCloud) -> bytes:
    records = np.empty((len(cloud), 4), dtype=RECORD_DTYPE)
    records[:, :3] = cloud.positions
    records[:, 3] = cloud.intensity
    return records.tobytes()


def write_kitti_bin(cloud: PointCloud, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_kitti_bin(cloud))
    logger.debug(f"Wrote {len(cloud)} points to {path}")


def read_ascii(path, frame_tag: FrameTag = FrameTag.WORLD, source_id: str = None) -> PointCloud:
    path = Path(path)
    rows = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            fields = stripped.split()
            if len(fields) not in (3, 4):
                raise ParseError(f"expected 'x y z [intensity]', got {len(fields)} fields", line_no, str(path))
            try:
                values = [float(v) for v in fields]
            except ValueError as e:
                raise ParseError(str(e), line_no, str(path)) from None
            if len(values) == 3:
                values.append(0.0)
            rows.append(values)
    records = np.array(rows, dtype=np.float64).reshape(-1, 4)
    return PointCloud(records[:, :3], records[:, 3], frame_tag, path.stem if source_id is None else source_id)


def write_ascii(cloud: PointCloud, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = np.column_stack((cloud.positions, cloud.intensity))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for x, y, z, i in records:
            f.write(f"{x:.9g} {y:.9g} {z:.9g} {i:.9g}\n")


def read_cloud(path, frame_tag: FrameTag = FrameTag.WORLD, source_id: str = None) -> PointCloud:
    if Path(path).suffix.lower() in ASCII_SUFFIXES:
        return read_ascii(path, frame_tag, source_id)
    return read_kitti_bin(path, frame_tag, source_id)


def write_cloud(cloud: PointCloud, path) -> None:
    if Path(path).suffix.lower() in ASCII_SUFFIXES:
        write_ascii(cloud, path)
    else:
        write_kitti_bin(cloud, path)
