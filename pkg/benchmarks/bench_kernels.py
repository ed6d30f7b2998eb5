#!/usr/bin/env python3
"""Times the numba kernels against the pure-Python/numpy fallback.

Run from the repo root:

    python3 benchmarks/bench_kernels.py [--repeats 5]

The same workloads the simulation is dominated by: full laser sweeps,
plans across the default arena, scan integration into the belief layers,
and path projection inside the follower.
"""

import argparse
import math
import time

import numpy as np

from mixsim.kernels import impl
from mixsim.world.grid import load_map
from pathlib import Path

try:
    from numba import njit
except ImportError:
    njit = None


def bench(fn, args, repeats, inner):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    arena = load_map(Path(__file__).resolve().parent.parent / "scenarios" / "arena24.txt")
    occ = arena.grid.cells
    res = arena.grid.resolution
    bearings = -np.pi + 2 * np.pi * np.arange(72) / 72

    rng = np.random.default_rng(0)
    xs = np.cumsum(rng.uniform(0.1, 0.4, 120))
    ys = np.cumsum(rng.uniform(-0.2, 0.2, 120))
    cum = np.concatenate(([0.0], np.cumsum(np.hypot(np.diff(xs), np.diff(ys))))).copy()

    phantom = np.zeros_like(occ)
    first_free = np.full(occ.shape, -1.0)
    ranges_for_integrate = None

    workloads = {
        "scan_ranges (72 beams, 24 m arena)": (
            "scan_ranges",
            (occ, 12.0, 12.0, 0.3, bearings, 5.0, res),
            200,
        ),
        "astar (corner to corner)": ("astar", (occ, 88, 8, 10, 84, res), 20),
        "polyline_progress (120 vertices)": (
            "polyline_progress",
            (xs, ys, cum, 7.0, 1.0),
            2000,
        ),
    }

    backends = {"numpy ": impl.build(None)}
    if njit is not None:
        backends["numba "] = impl.build(lambda f: njit(fastmath=False)(f))

    print(f"{'workload':45s}" + "".join(f"{name:>14s}" for name in backends) + f"{'speedup':>10s}")
    for label, (fn_name, fn_args, inner) in workloads.items():
        times = {}
        for bname, backend in backends.items():
            fn = getattr(backend, fn_name)
            fn(*fn_args)  # warm-up / JIT compile
            times[bname] = bench(fn, fn_args, args.repeats, inner)
        row = f"{label:45s}"
        for bname in backends:
            row += f"{times[bname] * 1e6:12.1f}us"
        if len(times) == 2:
            a, b = times.values()
            row += f"{a / b:9.1f}x"
        print(row)

    # integrate_scan mutates its arrays; bench separately with fresh state
    label = "integrate_scan (72 beams)"
    times = {}
    for bname, backend in backends.items():
        ranges_for_integrate = backend.scan_ranges(occ, 12.0, 12.0, 0.3, bearings, 5.0, res)
        hits = (ranges_for_integrate < 5.0 - 1e-9).astype(np.uint8)
        ph = phantom.copy()
        ff = first_free.copy()
        fn = backend.integrate_scan
        fn(occ, ph, ff, 0.0, 12.0, 12.0, 0.3, bearings, ranges_for_integrate, hits, 2.0, res)

        def run(backend_fn=fn, ph=ph, ff=ff, rr=ranges_for_integrate, hh=hits):
            backend_fn(occ, ph, ff, 0.1, 12.0, 12.0, 0.3, bearings, rr, hh, 2.0, res)

        times[bname] = bench(lambda: None if run() else None, (), args.repeats, 200)
    row = f"{label:45s}"
    for bname in backends:
        row += f"{times[bname] * 1e6:12.1f}us"
    if len(times) == 2:
        a, b = times.values()
        row += f"{a / b:9.1f}x"
    print(row)


if __name__ == "__main__":
    main()
