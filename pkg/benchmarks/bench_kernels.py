#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy twins.

Run:  python3 benchmarks/bench_kernels.py [--repeats 5]

Requires numba (the default install); the numpy column is the path taken
when ERGOLAB_NO_NUMBA=1.
"""

import argparse
import time

import numpy as np

from ergolab import kernels as K
from ergolab.backend import HAVE_NUMBA


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def make_cases(rng):
    u = rng.random(1023) * np.exp(2j * np.pi * rng.random(1023))
    b = rng.uniform(-1, 1, 256).astype(np.complex128)
    c = rng.uniform(-1, 1, 511).astype(np.complex128)
    k3 = rng.uniform(-1, 1, (7, 3 * 15 + 1)).astype(np.complex128)
    cube = (rng.uniform(-1, 1, 200) + 1j * rng.uniform(-1, 1, 200))
    f13 = rng.uniform(-1, 1, 13).astype(np.complex128)
    return [
        ("vdc_sums  N=512 H=512",
         lambda: K._vdc_sums_loops(u, 512, 512),
         lambda: K._vdc_sums_np(u, 512, 512)),
        ("assani_inner  N=256",
         lambda: K._assani_inner_loops(b, c, 256),
         lambda: K._assani_inner_np(b, c, 256)),
        ("cubic_direct  k=3 N=16",
         lambda: K._cubic_direct_loops(k3, 16, 3),
         lambda: K._cubic_direct_np(k3, 16, 3)),
        ("local_cube  k=3 H=8 N=24",
         lambda: K._local_cube_values_loops(cube, 3, 8, 24),
         lambda: K._local_cube_values_np(cube, 3, 8, 24)),
        ("gowers_pow  p=13 k=4",
         lambda: K._gowers_pow_loops(f13, 4),
         lambda: K._gowers_pow_np(f13, 4)),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba unavailable (or disabled); nothing to compare")

    rng = np.random.default_rng(0)
    cases = make_cases(rng)
    for _, jit_fn, _np_fn in cases:  # compile before timing
        jit_fn()

    print(f"{'kernel':<26} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, jit_fn, np_fn in cases:
        t_jit = best_of(jit_fn, args.repeats)
        t_np = best_of(np_fn, args.repeats)
        print(f"{name:<26} {t_jit * 1e3:>8.2f}ms {t_np * 1e3:>8.2f}ms {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
