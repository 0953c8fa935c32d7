"""Benchmark the numba kernels against the pure numpy/python fallback.

Run both paths in one process by calling the jitted and plain builds
directly; the env-flag path (OBLOT_PURE_NUMPY=1) selects the fallback at
import time for whole-program runs.

    python benchmarks/bench_kernels.py
"""

import random
import time

import numpy as np

from oblot import _kernels


def timed(fn, args_iter, label):
    # warm-up (numba compiles on first call)
    args0 = args_iter[0]
    fn(*args0)
    t0 = time.perf_counter()
    for args in args_iter:
        fn(*args)
    dt = time.perf_counter() - t0
    print(f"{label:34s} {dt * 1e3:9.2f} ms  ({len(args_iter)} calls)")
    return dt


def main():
    rng = random.Random(0)
    sec_inputs = []
    for _ in range(20000):
        n = rng.randint(5, 20)
        pts = np.asarray([(rng.random(), rng.random()) for _ in range(n)])
        sec_inputs.append((pts[:, 0].copy(), pts[:, 1].copy()))
    cluster_inputs = [
        (xs, ys, 1e-9) for xs, ys in sec_inputs[:20000]
    ]

    print(f"numba available and active: {_kernels.USE_NUMBA}")
    if _kernels.USE_NUMBA:
        jit_sec = timed(_kernels._sec_kernel, sec_inputs, "smallest circle (numba)")
        py_sec = timed(_kernels._sec_impl, sec_inputs, "smallest circle (pure python)")
        print(f"speedup: {py_sec / jit_sec:.1f}x")
        jit_cl = timed(_kernels._cluster_kernel, cluster_inputs,
                       "eps clustering (numba)")
        py_cl = timed(_kernels._cluster_impl, cluster_inputs,
                      "eps clustering (pure python)")
        print(f"speedup: {py_cl / jit_cl:.1f}x")
    else:
        timed(_kernels._sec_kernel, sec_inputs, "smallest circle (fallback)")
        timed(_kernels._cluster_kernel, cluster_inputs, "eps clustering (fallback)")


if __name__ == "__main__":
    main()
