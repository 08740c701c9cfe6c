"""Typed job configuration and manifest rows."""

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..annotations import DEFAULT_VEHICLE_CATEGORIES
from ..errors import ConfigError
from ..segmentation import GroundSegmenterConfig
from ..utils.config_loader import load_config, merge_configs
from ..virtual_lidar import SensorSpec

ALL_VEHICLES = "all-vehicles"


class JobConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    input_cloud_path: str = Field(min_length=1, description="frame file or directory of frames")
    labels_path: Optional[str] = Field(
        default=None, min_length=1,
        description="label file, or directory of <frame_id>.txt; defaults to <input>/labels",
    )
    target_ids: Union[Literal["all-vehicles"], List[str]] = ALL_VEHICLES
    delta_t: Tuple[float, float, float] = Field(
        default=(0.0, 0.0, 1.73),
        description="sensor origin relative to the target centroid, vehicle frame, meters",
    )
    sensor: SensorSpec = Field(default_factory=SensorSpec)
    segmenter: GroundSegmenterConfig = Field(default_factory=GroundSegmenterConfig)
    segmenter_backend: Literal["polar_grid", "precomputed"] = "polar_grid"
    ground_sidecar: Optional[str] = Field(
        default=None, min_length=1,
        description="sidecar file, or directory of <frame_id>.bin; defaults to <input>/ground",
    )
    output_dir: str = Field(default="output", min_length=1)
    emit_kitti_labels: bool = False
    vehicle_categories: List[str] = Field(default_factory=lambda: list(DEFAULT_VEHICLE_CATEGORIES), min_length=1)
    remove_ego_points: bool = True
    ego_margin: float = Field(default=0.2, ge=0.0)
    min_points_per_box: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    progress: bool = True

    @field_validator('target_ids', mode='before')
    @classmethod
    def _split_target_ids(cls, value):
        if isinstance(value, str) and value != ALL_VEHICLES:
            value = [v.strip() for v in value.split(',')]
        if isinstance(value, (list, tuple)):
            ids = [str(v) for v in value]
            if not ids or any(not v for v in ids):
                raise ValueError("target_ids must be 'all-vehicles' or a non-empty list of ids")
            if len(set(ids)) != len(ids):
                raise ValueError(f"target_ids has duplicates: {ids}")
            return ids
        return value

    @classmethod
    def from_config(cls, config: dict, overrides: Optional[dict] = None) -> "JobConfig":
        """Build from a loaded config dict (sections job, sensor, segmenter,
        pipeline). overrides are flat JobConfig keys, or nested dicts for
        sensor/segmenter, applied last."""
        fields = dict(config.get('job') or {})
        for section in ('sensor', 'segmenter'):
            if config.get(section):
                fields[section] = dict(config[section])
        pipeline = config.get('pipeline') or {}
        for key in ('threads', 'progress'):
            if key in pipeline:
                fields[key] = pipeline[key]
        if overrides:
            merge_configs(fields, {k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**fields)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}") from e


def load_job_config(config_name=None, overrides: Optional[dict] = None) -> JobConfig:
    return JobConfig.from_config(load_config(config_name), overrides)


class ManifestRow(BaseModel):
    """One output frame, or one failure."""

    frame_id: str
    object_id: str
    status: Literal["ok", "failed"]
    n_pc: int = 0
    n_pcn: int = 0
    n_pcg: int = 0
    n_vn: int = 0
    n_vg: int = 0
    n_v: int = 0
    n_labels: int = 0
    ground_a: Optional[float] = None
    ground_b: Optional[float] = None
    ground_c: Optional[float] = None
    ground_d: Optional[float] = None
    output_path: str = ""
    error: str = ""
    duration_s: float = 0.0

    @property
    def sort_key(self):
        return (self.frame_id, self.object_id)
