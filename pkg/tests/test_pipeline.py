"""
End-to-end tests for rs2v.pipeline: per-target generation, batch runs over
frame directories, the manifest, config loading and the CLI.

Run with:
    pytest tests/test_pipeline.py -v -s
"""

import csv
import time

import numpy as np
import pytest

from rs2v.annotations import find_box, read_labels, select_target, transform_annotations
from rs2v.errors import ConfigError, UnknownTarget
from rs2v.geometry import FrameTag, world_to_vehicle_transform
from rs2v.pipeline import (
    MANIFEST_COLUMNS,
    FrameManifest,
    FrameSource,
    JobConfig,
    LoadedFrame,
    ManifestRow,
    discover_frames,
    generate_frame,
    generate_scene_targets,
    load_frame,
    load_job_config,
    read_manifest,
    run_batch,
    write_manifest,
)
from rs2v.pipeline.cli import main
from rs2v.pointcloud import read_kitti_bin
from rs2v.segmentation import PolarGridSegmenter, PrecomputedLabelSegmenter
from rs2v.utils.config_loader import load_config
from rs2v.utils.scenes import roadside_frame
from rs2v.virtual_lidar import SensorSpec, build_rays

DETERMINISTIC_COLUMNS = [c for c in MANIFEST_COLUMNS if c not in ("output_path", "duration_s")]


def job(input_path, output_dir, sensor, **kwargs):
    kwargs.setdefault("segmenter_backend", "precomputed")
    return JobConfig(
        input_cloud_path=str(input_path),
        output_dir=str(output_dir),
        sensor=sensor,
        progress=False,
        **kwargs,
    )


def manifest_records(path):
    with open(path, newline="", encoding="utf-8") as f:
        return [{c: row[c] for c in DETERMINISTIC_COLUMNS} for row in csv.DictReader(f)]


@pytest.fixture(scope="module")
def toy_frame():
    """Ground plane, two vehicles and a pedestrian."""
    frame = roadside_frame(n_vehicles=2, n_pedestrians=1, seed=11, ground_spacing=0.3, surface_spacing=0.1)
    print(f"\n[fixture] toy frame: {len(frame.cloud)} points, vehicles {frame.vehicle_ids}")
    return frame


@pytest.fixture(scope="module")
def frames_dir(tmp_path_factory, write_frames):
    directory = tmp_path_factory.mktemp("frames")
    write_frames(directory, n_frames=5, n_vehicles=4)
    return directory


# ---------------------------------------------------------------------------
# Single frame
# ---------------------------------------------------------------------------

def test_generate_frame_toy_scene(tmp_path, toy_frame, small_sensor):
    cfg = job("<memory>", tmp_path, small_sensor)
    loaded = LoadedFrame("toy", toy_frame.cloud, toy_frame.labels, PrecomputedLabelSegmenter(toy_frame.ground_mask))
    target = toy_frame.vehicle_ids[0]

    out = generate_frame(cfg, target, loaded)
    assert len(out.cloud) > 0
    assert out.cloud.frame_tag == FrameTag.VEHICLE
    assert out.row.status == "ok"
    assert out.row.n_v == out.row.n_vn + out.row.n_vg == len(out.cloud)
    assert out.row.n_pc == out.row.n_pcn + out.row.n_pcg
    assert out.row.ground_c == pytest.approx(1.0, abs=1e-6)

    # the target's own box sits at -delta_t and is not emitted
    x_wc, theta_wc = select_target(toy_frame.labels, target)
    t = world_to_vehicle_transform(x_wc, theta_wc, cfg.delta_t)
    ego = find_box(transform_annotations(toy_frame.labels, t), target)
    assert np.allclose(ego.centroid, -np.asarray(cfg.delta_t), atol=1e-9)
    assert target not in [b.object_id for b in out.labels]
    assert len(out.labels) == len(toy_frame.labels) - 1

    written = read_kitti_bin(tmp_path / "velodyne" / f"toy_{target}.bin")
    assert np.allclose(written.positions, out.cloud.positions, atol=1e-4)
    labels = read_labels(tmp_path / "labels" / f"toy_{target}.txt", FrameTag.VEHICLE)
    assert [b.object_id for b in labels] == [b.object_id for b in out.labels]


def test_generate_frame_with_polar_grid(toy_frame, small_sensor):
    cfg = job("<memory>", "unused", small_sensor, segmenter_backend="polar_grid")
    loaded = LoadedFrame("toy", toy_frame.cloud, toy_frame.labels, PolarGridSegmenter(cfg.segmenter))
    out = generate_frame(cfg, toy_frame.vehicle_ids[1], loaded, write=False)
    assert out.row.n_pcg > 0
    assert out.row.n_vg > 0
    assert out.row.output_path == ""


@pytest.fixture(scope="module")
def dense_frame():
    frame = roadside_frame(n_vehicles=11, extent=50.0, ground_spacing=0.24)
    print(f"\n[fixture] dense frame: {len(frame.cloud)} points")
    return frame


@pytest.mark.timing
@pytest.mark.parametrize("backend", ["precomputed", "polar_grid"])
def test_generate_frame_throughput(dense_frame, backend):
    """One target of a 200k-point frame on a 2048 x 64 sensor in under 5 s."""
    assert len(dense_frame.cloud) >= 200_000
    cfg = job("<memory>", "unused", SensorSpec(), segmenter_backend=backend)
    if backend == "precomputed":
        segmenter = PrecomputedLabelSegmenter(dense_frame.ground_mask)
    else:
        segmenter = PolarGridSegmenter(cfg.segmenter)
    loaded = LoadedFrame("dense", dense_frame.cloud, dense_frame.labels, segmenter)
    rays = build_rays(cfg.sensor)

    started = time.perf_counter()
    out = generate_frame(cfg, dense_frame.vehicle_ids[0], loaded, rays, write=False)
    elapsed = time.perf_counter() - started
    print(f"\n{backend}: {len(dense_frame.cloud)} points -> {out.row.n_v} in {elapsed:.2f}s")
    assert out.row.n_v > 0
    assert elapsed < 5.0


def test_ego_points_removed(toy_frame, small_sensor):
    loaded = LoadedFrame("toy", toy_frame.cloud, toy_frame.labels, PrecomputedLabelSegmenter(toy_frame.ground_mask))
    target = toy_frame.vehicle_ids[0]
    with_ego = generate_frame(job("<memory>", "x", small_sensor, remove_ego_points=False), target, loaded, write=False)
    without = generate_frame(job("<memory>", "x", small_sensor), target, loaded, write=False)
    assert without.row.n_pc < with_ego.row.n_pc


def test_min_points_per_box_filters_labels(toy_frame, small_sensor):
    loaded = LoadedFrame("toy", toy_frame.cloud, toy_frame.labels, PrecomputedLabelSegmenter(toy_frame.ground_mask))
    cfg = job("<memory>", "x", small_sensor, min_points_per_box=10**6)
    out = generate_frame(cfg, toy_frame.vehicle_ids[0], loaded, write=False)
    assert out.labels == []
    assert out.row.n_labels == 0


def test_generate_frame_unknown_target(toy_frame, small_sensor):
    loaded = LoadedFrame("toy", toy_frame.cloud, toy_frame.labels, PrecomputedLabelSegmenter(toy_frame.ground_mask))
    with pytest.raises(UnknownTarget):
        generate_frame(job("<memory>", "x", small_sensor), "no_such_car", loaded, write=False)


def test_generate_scene_targets(toy_frame, small_sensor):
    cfg = job("<memory>", "x", small_sensor)
    assert generate_scene_targets(toy_frame.labels, cfg) == sorted(toy_frame.vehicle_ids)
    explicit = job("<memory>", "x", small_sensor, target_ids="veh_01,veh_00")
    assert generate_scene_targets(toy_frame.labels, explicit) == ["veh_00", "veh_01"]


# ---------------------------------------------------------------------------
# Frame discovery
# ---------------------------------------------------------------------------

def test_discover_frames_directory(frames_dir, small_sensor):
    sources = discover_frames(job(frames_dir, "x", small_sensor))
    assert [s.frame_id for s in sources] == [f"{k:06d}" for k in range(5)]
    assert sources[0].labels_path == frames_dir / "labels" / "000000.txt"
    assert sources[0].sidecar_path == frames_dir / "ground" / "000000.bin"


def test_discover_single_file(frames_dir, small_sensor):
    sources = discover_frames(job(frames_dir / "000002.bin", "x", small_sensor))
    assert len(sources) == 1
    assert sources[0].frame_id == "000002"
    assert sources[0].labels_path == frames_dir / "labels" / "000002.txt"


def test_discover_missing_input(tmp_path, small_sensor):
    with pytest.raises(FileNotFoundError):
        discover_frames(job(tmp_path / "nowhere", "x", small_sensor))


def test_load_frame_requires_sidecar_for_precomputed(frames_dir, small_sensor):
    source = FrameSource("000000", frames_dir / "000000.bin", frames_dir / "labels" / "000000.txt")
    with pytest.raises(FileNotFoundError):
        load_frame(source, job(frames_dir, "x", small_sensor))
    loaded = load_frame(source, job(frames_dir, "x", small_sensor, segmenter_backend="polar_grid"))
    assert isinstance(loaded.segmenter, PolarGridSegmenter)


# ---------------------------------------------------------------------------
# Batch runs
# ---------------------------------------------------------------------------

def test_all_vehicles_single_frame(tmp_path, write_frames, small_sensor):
    """One roadside frame with 4 vehicles -> 4 vehicle-view frames."""
    write_frames(tmp_path / "in", n_frames=1, n_vehicles=4)
    manifest = run_batch(job(tmp_path / "in" / "000000.bin", tmp_path / "out", small_sensor))
    assert len(manifest.succeeded) == 4
    assert len(list((tmp_path / "out" / "velodyne").glob("*.bin"))) == 4


def test_batch_over_directory(tmp_path, frames_dir, small_sensor):
    out = tmp_path / "out"
    manifest = run_batch(job(frames_dir, out, small_sensor, emit_kitti_labels=True))
    assert manifest.ok
    assert len(manifest) == 20

    rows = read_manifest(out / "manifest.csv").rows
    assert [(r.frame_id, r.object_id) for r in rows] == sorted((r.frame_id, r.object_id) for r in rows)
    for row in rows:
        name = f"{row.frame_id}_{row.object_id}"
        assert row.output_path.endswith(f"{name}.bin")
        assert (out / "velodyne" / f"{name}.bin").exists()
        assert (out / "labels" / f"{name}.txt").exists()
        assert (out / "label_2" / f"{name}.txt").exists()
        assert row.n_v == row.n_vn + row.n_vg


def test_amplification_ratio(tmp_path, write_frames, small_sensor):
    """5 frames with 11 vehicles each give 11 outputs per input frame."""
    frames = write_frames(tmp_path / "in", n_frames=5, n_vehicles=11, n_pedestrians=2)
    expected = sum(len(f.vehicle_ids) for f in frames)
    manifest = run_batch(job(tmp_path / "in", tmp_path / "out", small_sensor, threads=4))
    assert manifest.ok
    assert len(manifest.succeeded) == expected == 55
    assert len(manifest.succeeded) / len(frames) == pytest.approx(11.0)


def test_empty_input_directory(tmp_path, small_sensor):
    (tmp_path / "in").mkdir()
    manifest = run_batch(job(tmp_path / "in", tmp_path / "out", small_sensor))
    assert len(manifest) == 0
    assert manifest.ok
    lines = (tmp_path / "out" / "manifest.csv").read_text(encoding="utf-8").splitlines()
    assert lines == [",".join(MANIFEST_COLUMNS)]


@pytest.mark.expect_errors
def test_corrupt_frame_is_recorded(tmp_path, write_frames, small_sensor):
    write_frames(tmp_path / "in", n_frames=5, n_vehicles=1, n_pedestrians=0)
    with open(tmp_path / "in" / "000003.bin", "ab") as f:
        f.write(b"\x00\x01\x02")

    manifest = run_batch(job(tmp_path / "in", tmp_path / "out", small_sensor))
    assert not manifest.ok
    assert len(manifest.failed) == 1
    assert len(manifest.succeeded) == 4
    failure = manifest.failed[0]
    assert failure.frame_id == "000003"
    assert failure.object_id == "*"
    assert "TruncatedRecord" in failure.error


@pytest.mark.expect_errors
def test_unknown_explicit_target_fails_alone(tmp_path, write_frames, small_sensor):
    write_frames(tmp_path / "in", n_frames=1, n_vehicles=2, n_pedestrians=0)
    cfg = job(tmp_path / "in", tmp_path / "out", small_sensor, target_ids=["veh_00", "ghost"])
    manifest = run_batch(cfg)
    assert [r.object_id for r in manifest.succeeded] == ["veh_00"]
    assert [r.object_id for r in manifest.failed] == ["ghost"]
    assert "UnknownTarget" in manifest.failed[0].error


def test_batch_is_deterministic(tmp_path, frames_dir, small_sensor):
    """Serial and threaded runs write identical clouds and manifests."""
    first = run_batch(job(frames_dir, tmp_path / "a", small_sensor))
    second = run_batch(job(frames_dir, tmp_path / "b", small_sensor, threads=3))
    assert len(first) == len(second) == 20
    for path in sorted((tmp_path / "a" / "velodyne").glob("*.bin")):
        assert path.read_bytes() == (tmp_path / "b" / "velodyne" / path.name).read_bytes()
    for path in sorted((tmp_path / "a" / "labels").glob("*.txt")):
        assert path.read_bytes() == (tmp_path / "b" / "labels" / path.name).read_bytes()
    assert manifest_records(tmp_path / "a" / "manifest.csv") == manifest_records(tmp_path / "b" / "manifest.csv")


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------

def test_manifest_round_trip(tmp_path):
    manifest = FrameManifest()
    manifest.add(ManifestRow(frame_id="b", object_id="veh_1", status="ok", n_v=10, n_vn=4, n_vg=6,
                             ground_a=0.0, ground_b=0.0, ground_c=1.0, ground_d=2.53, duration_s=0.5))
    manifest.add(ManifestRow(frame_id="a", object_id="*", status="failed", error="TruncatedRecord: bad"))
    path = write_manifest(manifest, tmp_path / "manifest.csv")

    back = read_manifest(path)
    assert [r.frame_id for r in back.rows] == ["a", "b"]
    assert back.rows[0].ground_a is None
    assert back.rows[1].ground_d == pytest.approx(2.53)
    assert back.rows[1].n_v == 10
    assert not back.ok


def test_manifest_header_is_fixed():
    assert MANIFEST_COLUMNS[:3] == ["frame_id", "object_id", "status"]
    assert MANIFEST_COLUMNS[-1] == "duration_s"


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def test_default_config_loads():
    cfg = load_job_config()
    assert cfg.sensor.m == 2048 and cfg.sensor.k == 64
    assert cfg.delta_t == (0.0, 0.0, 1.73)
    assert cfg.target_ids == "all-vehicles"


def test_overrides_beat_file(tmp_path):
    path = tmp_path / "job.yaml"
    path.write_text("job:\n  input_cloud_path: frames\n  output_dir: from_file\nsensor:\n  m: 1024\n", encoding="utf-8")
    cfg = load_job_config(str(path), {"output_dir": "from_cli", "sensor": {"frustum_expansion": 3.0}})
    assert cfg.output_dir == "from_cli"
    assert cfg.sensor.m == 1024
    assert cfg.sensor.frustum_expansion == 3.0


def test_env_overrides(tmp_path, monkeypatch):
    path = tmp_path / "job.yaml"
    path.write_text("job:\n  input_cloud_path: frames\n", encoding="utf-8")
    monkeypatch.setenv("RS2V_THREADS", "6")
    monkeypatch.setenv("RS2V_OUTPUT_DIR", str(tmp_path / "env_out"))
    cfg = load_job_config(str(path))
    assert cfg.threads == 6
    assert cfg.output_dir == str(tmp_path / "env_out")
    assert load_job_config(str(path), {"threads": 2}).threads == 2


def test_rs2v_config_env_selects_file(tmp_path, monkeypatch):
    path = tmp_path / "other.yaml"
    path.write_text("job:\n  input_cloud_path: elsewhere\n", encoding="utf-8")
    monkeypatch.setenv("RS2V_CONFIG", str(path))
    assert load_job_config().input_cloud_path == "elsewhere"


@pytest.mark.parametrize("body", [
    "job:\n  input_cloud_path: ''\n",
    "job:\n  input_cloud_path: x\nsensor:\n  frustum_expansion: 5\n",
    "job:\n  input_cloud_path: x\nsensor:\n  min_range: 50\n  max_range: 10\n",
    "job:\n  input_cloud_path: x\n  target_ids: []\n",
    "job:\n  input_cloud_path: x\n  typo_key: 1\n",
    "job:\n  input_cloud_path: x\npipeline:\n  threads: 0\n",
])
def test_invalid_config_raises(tmp_path, body):
    path = tmp_path / "bad.yaml"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_job_config(str(path))


def test_yaml_syntax_error(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("job: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "missing.yaml"))


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def write_cli_config(tmp_path, frames_dir):
    path = tmp_path / "cli.yaml"
    path.write_text(
        f"job:\n  input_cloud_path: {frames_dir}\n  output_dir: {tmp_path / 'out'}\n"
        f"  segmenter_backend: precomputed\nsensor:\n  m: 256\n  k: 16\n",
        encoding="utf-8",
    )
    return path


def test_cli_generate(tmp_path, frames_dir, capsys):
    config = write_cli_config(tmp_path, frames_dir)
    code = main(["--log-level", "WARNING", "generate", "--config", str(config), "--no-progress",
                 "--targets", "veh_00", "--delta-t", "0", "0", "1.5", "--expansion", "2.5"])
    assert code == 0
    assert "5 outputs, 0 failures" in capsys.readouterr().out
    assert len(read_manifest(tmp_path / "out" / "manifest.csv")) == 5


@pytest.mark.expect_errors
def test_cli_generate_partial_failure(tmp_path, write_frames, capsys):
    write_frames(tmp_path / "in", n_frames=2, n_vehicles=1, n_pedestrians=0)
    (tmp_path / "in" / "000001.bin").write_bytes(b"\x00" * 5)
    config = write_cli_config(tmp_path, tmp_path / "in")
    assert main(["generate", "--config", str(config), "--no-progress"]) == 1


def test_cli_generate_invalid_config(tmp_path):
    config = write_cli_config(tmp_path, tmp_path)
    assert main(["generate", "--config", str(config), "--expansion", "7"]) == 2
    assert main(["generate", "--config", str(tmp_path / "missing.yaml")]) == 2


def test_cli_validate(tmp_path, frames_dir, capsys):
    config = write_cli_config(tmp_path, frames_dir)
    assert main(["validate", str(config)]) == 0
    out = capsys.readouterr().out
    assert "Config OK" in out
    assert "frustum_expansion: 2.0" in out

    bad = tmp_path / "bad.yaml"
    bad.write_text("sensor:\n  k: 0\n", encoding="utf-8")
    assert main(["validate", str(bad)]) == 2


def test_cli_inspect(frames_dir, capsys):
    assert main(["inspect", str(frames_dir / "000000.bin")]) == 0
    out = capsys.readouterr().out
    assert "points" in out
    assert "min xyz" in out and "intensity" in out


def test_cli_inspect_rejects_non_finite_cloud(tmp_path, capsys):
    path = tmp_path / "nan.bin"
    path.write_bytes(np.array([[np.nan, 0.0, 0.0, 0.0], [1.0, 2.0, 3.0, 0.5]], dtype="<f4").tobytes())
    assert main(["inspect", str(path)]) == 1
    assert "Cannot read" in capsys.readouterr().err
