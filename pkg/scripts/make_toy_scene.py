"""Write a directory of synthetic roadside frames for trying out the CLI.

    python scripts/make_toy_scene.py data/frames --frames 5 --vehicles 11
    rs2v generate --input data/frames --output output
"""

import argparse

from rs2v.utils.scenes import roadside_frame


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Generate synthetic roadside frames")
    parser.add_argument("output", help="Directory for <frame_id>.bin, labels/ and ground/")
    parser.add_argument("--frames", type=int, default=5)
    parser.add_argument("--vehicles", type=int, default=4, help="Vehicle boxes per frame")
    parser.add_argument("--pedestrians", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--extent", type=float, default=40.0, help="Half width of the ground square, meters")
    parser.add_argument("--ground-spacing", type=float, default=0.25)

    args = parser.parse_args()

    for k in range(args.frames):
        frame = roadside_frame(
            n_vehicles=args.vehicles,
            n_pedestrians=args.pedestrians,
            seed=args.seed + k,
            extent=args.extent,
            ground_spacing=args.ground_spacing,
        )
        path = frame.write(args.output, f"{k:06d}")
        print(f"Wrote {path}: {len(frame.cloud)} points, {len(frame.labels)} labels")
