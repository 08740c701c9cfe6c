"""Segmenter backed by externally computed per-point ground flags.

Sidecar file: one byte per point of the source frame, 0 = non-ground,
1 = ground. This is how the output of a dedicated segmentation tool is
wired in.
"""

from pathlib import Path

import numpy as np

from ..errors import LabelLengthMismatch, ParseError
from ..pointcloud import PointCloud
from .base import GroundSegmenter


def read_ground_sidecar(path) -> np.ndarray:
    path = Path(path)
    flags = np.frombuffer(path.read_bytes(), dtype=np.uint8)
    bad = np.flatnonzero(flags > 1)
    if bad.size:
        raise ParseError(f"ground flag {int(flags[bad[0]])} at byte {int(bad[0])} is not 0 or 1", path=str(path))
    return flags.astype(bool)


def write_ground_sidecar(flags, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(np.asarray(flags, dtype=bool).astype(np.uint8).tobytes())


class PrecomputedLabelSegmenter(GroundSegmenter):
    """Flags are indexed by the points' positions in their source frame, so
    the segmenter still applies after range gating or cropping."""

    def __init__(self, flags):
        self.flags = np.asarray(flags, dtype=bool).reshape(-1)

    @classmethod
    def from_file(cls, path) -> "PrecomputedLabelSegmenter":
        return cls(read_ground_sidecar(path))

    def ground_mask(self, cloud: PointCloud) -> np.ndarray:
        if self.flags.size != cloud.source_size:
            raise LabelLengthMismatch(
                f"sidecar has {self.flags.size} flags, frame '{cloud.source_id}' has {cloud.source_size} points"
            )
        return self.flags[cloud.index]
