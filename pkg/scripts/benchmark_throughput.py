"""Per-target generation time on a synthetic ~200k point roadside frame.

    python scripts/benchmark_throughput.py
"""

from itertools import product

from fvcore.common.benchmark import benchmark

from rs2v.pipeline import JobConfig, LoadedFrame, generate_frame
from rs2v.segmentation import PolarGridSegmenter, PrecomputedLabelSegmenter
from rs2v.utils.scenes import roadside_frame
from rs2v.virtual_lidar import SensorSpec, build_rays


def make_generate(m: int, k: int, segmenter: str, ground_spacing: float):
    scene = roadside_frame(n_vehicles=11, seed=7, extent=50.0, ground_spacing=ground_spacing)
    sensor = SensorSpec(m=m, k=k)
    cfg = JobConfig(input_cloud_path="<memory>", sensor=sensor, progress=False)
    seg = PrecomputedLabelSegmenter(scene.ground_mask) if segmenter == "precomputed" else PolarGridSegmenter(cfg.segmenter)
    frame = LoadedFrame("bench", scene.cloud, scene.labels, seg)
    rays = build_rays(sensor)
    target = scene.vehicle_ids[0]
    print(f"m={m} k={k} {segmenter}: {len(scene.cloud)} points")

    def run():
        generate_frame(cfg, target, frame, rays, write=False)

    return run


def bm_generate_frame() -> None:
    kwargs_list = []
    for (m, k), segmenter in product([(1024, 32), (2048, 64)], ["precomputed", "polar_grid"]):
        kwargs_list.append({"m": m, "k": k, "segmenter": segmenter, "ground_spacing": 0.24})

    benchmark(make_generate, "GENERATE_FRAME", kwargs_list, num_iters=5, warmup_iters=1)


if __name__ == "__main__":
    bm_generate_frame()
