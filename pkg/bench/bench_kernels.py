#!/usr/bin/env python3
"""Compare the compiled geometry kernels against the pure-Python reference.

Times the two hot operations the planner leans on: pairwise oriented-box
overlap tests and swept-template collision checks against an obstacle set.
Run from the repository root:

    python3 bench/bench_kernels.py [--pairs 200000] [--sweeps 2000]
"""

import argparse
import random
import time

import numpy as np

from posgraph.kernels import available_backends


def make_boxes(rng: random.Random, n: int) -> list[tuple]:
    out = []
    for _ in range(n):
        out.append((rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 2),
                    rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0),
                    rng.uniform(-3.14, 3.14)))
    return out


def bench_overlap(mod, pairs: list[tuple]) -> tuple[float, int]:
    fn = mod.obb_overlap
    hits = 0
    t0 = time.perf_counter()
    for a, b in pairs:
        hits += fn(a[0], a[1], a[2], a[3], a[4], a[5], a[6],
                   b[0], b[1], b[2], b[3], b[4], b[5], b[6])
    return time.perf_counter() - t0, hits


def bench_sweep(mod, sweeps: list[np.ndarray], obstacles: np.ndarray) -> tuple[float, int]:
    fn = mod.poses_sweep_hits_any
    hits = 0
    t0 = time.perf_counter()
    for poses in sweeps:
        hits += fn(poses, 0.0, 0.0, 0.1, 0.35, 0.35, 0.9, 0.0, obstacles)
    return time.perf_counter() - t0, hits


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200_000)
    parser.add_argument("--sweeps", type=int, default=2_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    boxes = make_boxes(rng, 512)
    pairs = [(rng.choice(boxes), rng.choice(boxes)) for _ in range(args.pairs)]
    obstacles = np.array(make_boxes(rng, 24), dtype=np.float64)
    sweeps = []
    for _ in range(args.sweeps):
        n = rng.randrange(8, 64)
        poses = np.empty((n, 4), dtype=np.float64)
        poses[:, 0] = [rng.uniform(0, 10) for _ in range(n)]
        poses[:, 1] = [rng.uniform(0, 10) for _ in range(n)]
        poses[:, 2] = [rng.uniform(0, 2) for _ in range(n)]
        poses[:, 3] = [rng.uniform(-3.14, 3.14) for _ in range(n)]
        sweeps.append(poses)

    backends = available_backends()
    if len(backends) < 2:
        print("compiled backend unavailable; benchmarking the reference only")

    results = {}
    for mod in backends:
        name = mod.BACKEND_NAME
        t_overlap, h1 = bench_overlap(mod, pairs)
        t_sweep, h2 = bench_sweep(mod, sweeps, obstacles)
        results[name] = (t_overlap, t_sweep)
        print(f"{name:9s} obb_overlap: {t_overlap:7.3f}s ({args.pairs / t_overlap:11.0f}/s, "
              f"{h1} hits)   sweep: {t_sweep:7.3f}s ({args.sweeps / t_sweep:9.0f}/s, {h2} hits)")

    hits_match = len({(bench_overlap(mod, pairs[:2000])[1],
                       bench_sweep(mod, sweeps[:100], obstacles)[1])
                      for mod in backends}) == 1
    print(f"backend agreement on sampled workload: {hits_match}")

    if "compiled" in results and "pure" in results:
        po, ps = results["pure"]
        co, cs = results["compiled"]
        print(f"speedup compiled/pure: obb_overlap {po / co:5.1f}x   sweep {ps / cs:5.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
