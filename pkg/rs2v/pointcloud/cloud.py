from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..geometry import FrameTag


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered points with one intensity value each.

    positions is (N, 3) float64 meters in the frame named by frame_tag.
    index holds each point's position in the frame it was loaded from and
    source_size that frame's point count, so subsets can be matched back to
    per-point sidecar data. Arrays are read-only; every operation returns a
    new cloud.
    """

    positions: np.ndarray
    intensity: np.ndarray
    frame_tag: FrameTag
    source_id: str = ""
    index: Optional[np.ndarray] = None
    source_size: Optional[int] = None

    def __post_init__(self):
        positions = np.array(self.positions, dtype=np.float64).reshape(-1, 3)
        intensity = np.array(self.intensity, dtype=np.float64).reshape(-1)
        n = positions.shape[0]
        if intensity.shape[0] != n:
            raise ValueError(f"intensity has {intensity.shape[0]} values for {n} points")
        if not np.all(np.isfinite(positions)):
            raise ValueError(f"point cloud '{self.source_id}' contains non-finite positions")
        index = np.arange(n, dtype=np.int64) if self.index is None else np.array(self.index, dtype=np.int64).reshape(-1)
        if index.shape[0] != n:
            raise ValueError(f"index has {index.shape[0]} entries for {n} points")
        source_size = n if self.source_size is None else int(self.source_size)
        for arr in (positions, intensity, index):
            arr.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "intensity", intensity)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "source_size", source_size)
        object.__setattr__(self, "frame_tag", FrameTag(self.frame_tag))

    @classmethod
    def empty(cls, frame_tag: FrameTag, source_id: str = "") -> "PointCloud":
        return cls(np.zeros((0, 3)), np.zeros(0), frame_tag, source_id)

    @classmethod
    def from_xyz(cls, positions, frame_tag: FrameTag, intensity=None, source_id: str = "") -> "PointCloud":
        positions = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
        if intensity is None:
            intensity = np.zeros(positions.shape[0])
        return cls(positions, intensity, frame_tag, source_id)

    def __len__(self) -> int:
        return self.positions.shape[0]

    def subset(self, selector) -> "PointCloud":
        """Points picked by a boolean mask or an index array, order kept."""
        return PointCloud(
            self.positions[selector], self.intensity[selector], self.frame_tag,
            self.source_id, self.index[selector], self.source_size,
        )

    def with_positions(self, positions, frame_tag: Optional[FrameTag] = None) -> "PointCloud":
        return PointCloud(
            positions, self.intensity, frame_tag or self.frame_tag,
            self.source_id, self.index, self.source_size,
        )

    def __repr__(self):
        return f"PointCloud(n={len(self)}, frame={self.frame_tag.value}, source_id={self.source_id!r})"


def concatenate(clouds, source_id: str = None) -> PointCloud:
    """Join clouds of one frame into a new cloud with fresh indices."""
    clouds = list(clouds)
    if not clouds:
        raise ValueError("cannot concatenate an empty list of clouds")
    tags = {c.frame_tag for c in clouds}
    if len(tags) != 1:
        raise ValueError(f"cannot concatenate clouds in different frames: {sorted(t.value for t in tags)}")
    return PointCloud(
        np.concatenate([c.positions for c in clouds]),
        np.concatenate([c.intensity for c in clouds]),
        tags.pop(),
        clouds[0].source_id if source_id is None else source_id,
    )
