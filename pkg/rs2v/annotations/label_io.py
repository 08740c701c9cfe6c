"""Label files.

Native format, one box per line:

    object_id category l w h cx cy cz rx ry rz

Lines that are blank or start with '#' are ignored. The KITTI export is lossy
(yaw only, camera axes, no calibration) and meant for off-the-shelf training
tools.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np

from ..errors import ParseError
from ..geometry import FrameTag
from .boxes import BoxAnnotation, box_yaw, wrap_angle

logger = logging.getLogger(__name__)

NATIVE_FIELDS = 11
HEADER = "# object_id category l w h cx cy cz rx ry rz"


def parse_label_line(line: str, line_no: int = None, path: str = None,
                     frame_tag: FrameTag = FrameTag.WORLD) -> BoxAnnotation:
    fields = line.split()
    if len(fields) != NATIVE_FIELDS:
        raise ParseError(f"expected {NATIVE_FIELDS} fields, got {len(fields)}", line_no, path)
    object_id, category = fields[0], fields[1]
    try:
        values = np.array([float(v) for v in fields[2:]])
    except ValueError as e:
        raise ParseError(str(e), line_no, path) from None
    if not np.all(np.isfinite(values)):
        raise ParseError("non-finite numeric field", line_no, path)
    try:
        return BoxAnnotation(object_id, category, values[0:3], values[3:6], values[6:9], frame_tag)
    except ValueError as e:
        raise ParseError(str(e), line_no, path) from None


def read_labels(path, frame_tag: FrameTag = FrameTag.WORLD) -> List[BoxAnnotation]:
    path = Path(path)
    boxes = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            boxes.append(parse_label_line(stripped, line_no, str(path), frame_tag))
    return boxes


def format_label_line(box: BoxAnnotation) -> str:
    values = np.concatenate((box.dimensions, box.centroid, box.rotation))
    return " ".join([box.object_id, box.category] + [f"{v:.12g}" for v in values])


def write_labels(boxes: Iterable[BoxAnnotation], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(HEADER + "\n")
        for box in boxes:
            f.write(format_label_line(box) + "\n")


def kitti_label_line(box: BoxAnnotation) -> str:
    """KITTI object label in camera axes (x right, y down, z forward).

    Location is the bottom-face centre, rotation_y the yaw about camera y.
    Truncation, occlusion and the 2D box are written as zeros.
    """
    length, width, height = box.dimensions
    x, y, z = box.centroid
    cam = np.array([-y, -z + height / 2.0, x])
    rotation_y = wrap_angle(-box_yaw(box) - np.pi / 2.0)
    alpha = wrap_angle(rotation_y - float(np.arctan2(cam[0], cam[2])))
    fields = [box.category, "0.00", "0", f"{alpha:.2f}", "0.00", "0.00", "0.00", "0.00",
              f"{height:.2f}", f"{width:.2f}", f"{length:.2f}",
              f"{cam[0]:.2f}", f"{cam[1]:.2f}", f"{cam[2]:.2f}", f"{rotation_y:.2f}"]
    return " ".join(fields)


def write_kitti_labels(boxes: Sequence[BoxAnnotation], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    skipped = [b.object_id for b in boxes if b.frame_tag != FrameTag.VEHICLE]
    if skipped:
        logger.warning(f"Skipping {len(skipped)} world-frame boxes in KITTI export: {skipped}")
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for box in boxes:
            if box.frame_tag == FrameTag.VEHICLE:
                f.write(kitti_label_line(box) + "\n")
