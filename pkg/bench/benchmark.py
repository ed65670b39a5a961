#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Run with the default environment so the numba backend loads; the numpy
reference implementations are always importable, so both paths are timed
in one process.  Set DNSURF_NO_NUMBA=1 to confirm the fallback wiring.
"""

import time

import numpy as np

from dnsurf import kernels


def _time(fn, *args, repeat=200):
    fn(*args)  # warm-up (includes JIT compilation for the numba path)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def main():
    rng = np.random.default_rng(0)
    y = rng.standard_normal(200_001)
    F = rng.standard_normal((1024, 1024))

    rows = []
    t_np = _time(kernels._cumulative_simpson_np, y, 1e-5)
    t_ac = _time(kernels.cumulative_simpson, y, 1e-5)
    rows.append(("cumulative_simpson (2e5 nodes)", t_np, t_ac))

    t_np = _time(kernels._hyperbolic_laplacian_np, F, 1e-3, 1e-3, repeat=50)
    t_ac = _time(kernels.hyperbolic_laplacian, F, 1e-3, 1e-3, repeat=50)
    rows.append(("hyperbolic_laplacian (1024^2)", t_np, t_ac))

    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<34} {'numpy (ms)':>12} {'active (ms)':>12} {'speedup':>9}")
    for name, a, b in rows:
        print(f"{name:<34} {a * 1e3:>12.4f} {b * 1e3:>12.4f} {a / b:>8.2f}x")


if __name__ == "__main__":
    main()
