from .schemas import GroundSegmenterConfig
from .base import GroundSegmenter, SegmentationResult, check_partition
from .polar_grid import PolarGridSegmenter, segment_ground
from .precomputed import PrecomputedLabelSegmenter, read_ground_sidecar, write_ground_sidecar


def get_segmenter(config: GroundSegmenterConfig = None, sidecar_path: str = None) -> GroundSegmenter:
    if sidecar_path:
        return PrecomputedLabelSegmenter.from_file(sidecar_path)
    return PolarGridSegmenter(config)


__all__ = [
    'GroundSegmenterConfig',
    'GroundSegmenter',
    'SegmentationResult',
    'check_partition',
    'PolarGridSegmenter',
    'segment_ground',
    'PrecomputedLabelSegmenter',
    'read_ground_sidecar',
    'write_ground_sidecar',
    'get_segmenter',
]
