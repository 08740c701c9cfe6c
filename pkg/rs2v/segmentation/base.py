from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import WrongFrame
from ..geometry import FrameTag
from ..pointcloud import PointCloud


@dataclass(frozen=True, eq=False)
class SegmentationResult:
    non_ground: PointCloud
    ground: PointCloud

    @classmethod
    def from_mask(cls, cloud: PointCloud, ground_mask) -> "SegmentationResult":
        ground_mask = np.asarray(ground_mask, dtype=bool)
        return cls(non_ground=cloud.subset(~ground_mask), ground=cloud.subset(ground_mask))


class GroundSegmenter(ABC):

    @abstractmethod
    def ground_mask(self, cloud: PointCloud) -> np.ndarray:
        """Boolean mask over cloud, True for ground points."""
        ...

    def segment(self, cloud: PointCloud) -> SegmentationResult:
        if cloud.frame_tag != FrameTag.VEHICLE:
            raise WrongFrame(f"ground segmentation expects a vehicle-frame cloud, '{cloud.source_id}' is {cloud.frame_tag.value}")
        mask = np.asarray(self.ground_mask(cloud), dtype=bool)
        if mask.shape != (len(cloud),):
            raise ValueError(f"{type(self).__name__} returned a mask of shape {mask.shape} for {len(cloud)} points")
        return SegmentationResult.from_mask(cloud, mask)


def check_partition(result: SegmentationResult, cloud: PointCloud) -> bool:
    """True when the two parts are disjoint, cover cloud, and keep its order."""
    ng, g = result.non_ground.index, result.ground.index
    if ng.size + g.size != len(cloud):
        return False
    if np.any(np.diff(ng) <= 0) or np.any(np.diff(g) <= 0):
        return False
    return np.array_equal(np.sort(np.concatenate((ng, g))), np.sort(cloud.index))
