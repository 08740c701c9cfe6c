from .schemas import ALL_VEHICLES, JobConfig, ManifestRow, load_job_config
from .manifest import MANIFEST_COLUMNS, FrameManifest, read_manifest, write_manifest
from .frame import FrameOutput, FrameSource, LoadedFrame, generate_frame, generate_scene_targets, load_frame, output_name
from .batch import discover_frames, run_batch, run_target

__all__ = [
    'ALL_VEHICLES',
    'JobConfig',
    'ManifestRow',
    'load_job_config',
    'MANIFEST_COLUMNS',
    'FrameManifest',
    'read_manifest',
    'write_manifest',
    'FrameOutput',
    'FrameSource',
    'LoadedFrame',
    'generate_frame',
    'generate_scene_targets',
    'load_frame',
    'output_name',
    'discover_frames',
    'run_batch',
    'run_target',
]
