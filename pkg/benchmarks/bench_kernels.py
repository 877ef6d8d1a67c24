"""Compare the compiled and pure-Python float kernels on identical inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--samples N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from convreg import _kernels_py as py

try:
    from convreg import _kernels as cy
except ImportError:
    cy = None


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(samples: int, rng: np.random.Generator):
    a = rng.integers(-3, 4, size=(6, 3)).astype(float)
    b = rng.uniform(0.5, 2.0, size=6)
    xs = rng.normal(size=(samples, 3)) * 3
    gens = rng.normal(size=(6, 3))
    offsets = np.array([0, 2, 4, 6], dtype=np.intp)
    unit = xs / np.linalg.norm(xs, axis=1)[:, None]
    few = unit[: max(1, samples // 20)]
    return {
        "nnls": lambda k: [k.nnls(gens.T, x) for x in xs[:200]],
        "batch_polyhedron_distance": lambda k: k.batch_polyhedron_distance(a, b, xs),
        "batch_cone_distance_ratio": lambda k: k.batch_cone_distance_ratio(gens, offsets, gens, unit),
        "batch_min_decomposition": lambda k: k.batch_min_decomposition(gens, offsets, few, 200, 0.1),
    }


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s} {'max |diff|':>11s}")
    for name, fn in cases(args.samples, rng).items():
        tp = _time(lambda: fn(py), args.repeat)
        if cy is None:
            print(f"{name:32s} {tp:12.4f} {'n/a':>12s}")
            continue
        tc = _time(lambda: fn(cy), args.repeat)
        rp, rc = np.asarray(fn(py), dtype=float), np.asarray(fn(cy), dtype=float)
        finite = np.isfinite(rp) & np.isfinite(rc)
        diff = float(np.max(np.abs(rp[finite] - rc[finite]), initial=0.0))
        print(f"{name:32s} {tp:12.4f} {tc:12.4f} {tp / tc:8.1f}x {diff:11.2e}")


if __name__ == "__main__":
    main()
