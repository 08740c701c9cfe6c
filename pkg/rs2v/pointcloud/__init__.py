from .cloud import PointCloud, concatenate
from .kitti_io import (
    read_kitti_bin,
    write_kitti_bin,
    encode_kitti_bin,
    read_ascii,
    write_ascii,
    read_cloud,
    write_cloud,
)
from .preprocess import transform_cloud, range_gate, range_gate_mask, crop_box, cloud_bounds

__all__ = [
    'PointCloud',
    'concatenate',
    'read_kitti_bin',
    'write_kitti_bin',
    'encode_kitti_bin',
    'read_ascii',
    'write_ascii',
    'read_cloud',
    'write_cloud',
    'transform_cloud',
    'range_gate',
    'range_gate_mask',
    'crop_box',
    'cloud_bounds',
]
