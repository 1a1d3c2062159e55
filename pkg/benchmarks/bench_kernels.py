"""Benchmark the numba and numpy twins of the hot kernels.

Run from the repo root:

    python3 benchmarks/bench_kernels.py

Needs numba importable (do not set OXKIT_NO_NUMBA); the numba column
includes a warm-up call so JIT compilation is not timed.
"""

import time

import numpy as np

from oxkit._dispatch import ACTIVE_PATH
from oxkit import kernels
from oxkit.stats.srange import studentized_range_cdf

REPEATS = 5


def timeit(fn, *args, **kwargs):
    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    if ACTIVE_PATH != "numba":
        raise SystemExit("numba path unavailable; run without OXKIT_NO_NUMBA to compare paths")
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (2048, 2048, 3), dtype=np.uint8)
    patch = rng.integers(0, 256, (512, 512, 3), dtype=np.uint8)
    gt = rng.uniform(0, 512, (400, 2))
    det = rng.uniform(0, 512, (400, 2))

    cases = [
        ("resize 2048->1433 (x0.7)", lambda p: kernels.resize_bilinear_u8(img, 1434, 1434, 0.7, path=p)),
        ("resize 512->1024 (x2.0)", lambda p: kernels.resize_bilinear_u8(patch, 1024, 1024, 2.0, path=p)),
        ("box blur k=3 on 512^2", lambda p: kernels.box_blur_u8(patch, 3, path=p)),
        ("box blur k=4 on 512^2", lambda p: kernels.box_blur_u8(patch, 4, path=p)),
        ("hsv shift on 512^2", lambda p: kernels.hsv_shift_u8(patch, 3.0, -20.0, 10.0, path=p)),
        ("brightness/contrast 512^2", lambda p: kernels.brightness_contrast_u8(patch, 0.2, 0.4, path=p)),
        ("greedy match 400x400", lambda p: kernels.greedy_match(gt, det, 30.0, path=p)),
        ("studentized range cdf", lambda p: studentized_range_cdf(3.5, 6, 24, path=p)),
    ]

    print(f"{'kernel':<28}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fn in cases:
        fn("numba")  # warm up the JIT
        t_nb = timeit(fn, "numba")
        t_np = timeit(fn, "numpy")
        print(f"{name:<28}{t_nb * 1e3:>10.2f}ms{t_np * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
