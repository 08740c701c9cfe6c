from .boxes import (
    BoxAnnotation,
    DEFAULT_VEHICLE_CATEGORIES,
    transform_annotation,
    transform_annotations,
    find_box,
    select_target,
    select_vehicle_ids,
    points_in_box,
    count_points_in_boxes,
    box_yaw,
)
from .label_io import read_labels, write_labels, write_kitti_labels, kitti_label_line

__all__ = [
    'BoxAnnotation',
    'DEFAULT_VEHICLE_CATEGORIES',
    'transform_annotation',
    'transform_annotations',
    'find_box',
    'select_target',
    'select_vehicle_ids',
    'points_in_box',
    'count_points_in_boxes',
    'box_yaw',
    'read_labels',
    'write_labels',
    'write_kitti_labels',
    'kitti_label_line',
]
