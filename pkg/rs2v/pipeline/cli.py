"""rs2v command line: generate, inspect, validate.

Exit codes: 0 success, 1 at least one frame failed, 2 invalid config.
"""

import argparse
import logging
import sys

import numpy as np
import yaml

from .. import __version__
from ..errors import ConfigError, Rs2vError
from ..pointcloud import cloud_bounds, read_cloud
from .batch import run_batch
from .schemas import load_job_config

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_CONFIG = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rs2v", description="Resimulate roadside LiDAR frames as vehicle-mounted scans")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Generate vehicle-view frames")
    gen.add_argument("--config", help="YAML config (default configs/config.yaml or $RS2V_CONFIG)")
    gen.add_argument("--input", help="Frame file or directory of frames")
    gen.add_argument("--labels", help="Label file or directory")
    gen.add_argument("--targets", help="Comma-separated object ids, or all-vehicles")
    gen.add_argument("--output", help="Output directory")
    gen.add_argument("--threads", type=int, help="Worker threads")
    gen.add_argument("--emit-kitti-labels", action="store_true", default=None, help="Also write KITTI label_2 files")
    gen.add_argument("--delta-t", type=float, nargs=3, metavar=("X", "Y", "Z"), help="Sensor offset from the target centroid")
    gen.add_argument("--expansion", type=float, help="Frustum expansion factor in [1, 3]")
    gen.add_argument("--no-progress", action="store_true", help="Disable the progress bar")

    insp = sub.add_parser("inspect", help="Print point count and bounds of a cloud file")
    insp.add_argument("path")

    val = sub.add_parser("validate", help="Check a config without running")
    val.add_argument("config")
    return parser


def _overrides(args) -> dict:
    overrides = {
        "input_cloud_path": args.input,
        "labels_path": args.labels,
        "target_ids": args.targets,
        "output_dir": args.output,
        "threads": args.threads,
        "emit_kitti_labels": args.emit_kitti_labels,
        "delta_t": tuple(args.delta_t) if args.delta_t else None,
    }
    if args.expansion is not None:
        overrides["sensor"] = {"frustum_expansion": args.expansion}
    if args.no_progress:
        overrides["progress"] = False
    return overrides


def cmd_generate(args) -> int:
    try:
        cfg = load_job_config(args.config, _overrides(args))
    except (ConfigError, FileNotFoundError) as e:
        print(f"Invalid config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.progress and not sys.stderr.isatty():
        cfg = cfg.model_copy(update={"progress": False})

    try:
        manifest = run_batch(cfg)
    except (Rs2vError, OSError) as e:
        print(f"Batch failed: {e}", file=sys.stderr)
        return EXIT_FAILURES

    print(f"{len(manifest.succeeded)} outputs, {len(manifest.failed)} failures in {cfg.output_dir}")
    return EXIT_OK if manifest.ok else EXIT_FAILURES


def cmd_inspect(args) -> int:
    try:
        cloud = read_cloud(args.path)
    except (Rs2vError, OSError, ValueError) as e:
        print(f"Cannot read {args.path}: {e}", file=sys.stderr)
        return EXIT_FAILURES
    print(f"{args.path}: {len(cloud)} points")
    if len(cloud):
        low, high = cloud_bounds(cloud)
        print(f"  min xyz: {np.array2string(low, precision=3)}")
        print(f"  max xyz: {np.array2string(high, precision=3)}")
        print(f"  intensity: [{cloud.intensity.min():.3f}, {cloud.intensity.max():.3f}]")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        cfg = load_job_config(args.config)
    except (ConfigError, FileNotFoundError) as e:
        print(f"Invalid config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False), end="")
    print("Config OK")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "inspect": cmd_inspect,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
