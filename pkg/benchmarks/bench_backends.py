#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the hot paths on both backends regardless of the
GRAVCLOCK_DISABLE_NUMBA setting: proper-time radicand evaluation over large
sample arrays, the discrete path functional, and one full Newton assemble +
block-tridiagonal solve of the extremal-path relaxation.

Usage:  python benchmarks/bench_backends.py [--samples N] [--segments N] [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from gravclock import kernels


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=2**20, help="array length for the quadrature kernels")
    parser.add_argument("--segments", type=int, default=1024, help="trajectory segments for the solver kernels")
    parser.add_argument("--repeat", type=int, default=5, help="repetitions (best time reported)")
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    n = args.samples
    r = 1.0 + 0.1 * rng.random(n)
    theta = 0.5 * math.pi + 0.05 * rng.standard_normal(n)
    vr = 1e-3 * rng.standard_normal(n)
    vth = 1e-3 * rng.standard_normal(n)
    vph = 1e-2 * (1.0 + 0.1 * rng.random(n))
    gm, gj, c = 1e-6, 1e-3, 1.0

    m = args.segments
    frac = np.linspace(0.0, 1.0, m + 1)[:, None]
    x = np.ascontiguousarray(
        (1 - frac) * np.array([1.0, 0.5 * math.pi, 0.0]) + frac * np.array([1.0, 0.5 * math.pi, 0.3])
    )
    dt = 30.0 / m
    hg = np.array([1e-4 * c * dt, 1e-4 * c * dt, 1e-4 * c * dt])
    hh = np.array([3e-4 * c * dt, 3e-4 * c * dt, 3e-4 * c * dt])

    cases = {
        "radicand_array": lambda impl: impl["radicand_array"](r, theta, vr, vth, vph, gm, gj, c, 1),
        "first_order_integrand": lambda impl: impl["first_order_integrand_array"](r, theta, vr, vth, vph, gm, gj, c),
        "path_functional": lambda impl: impl["path_functional"](x, dt, gm, gj, c, 1),
        "newton_assemble+solve": lambda impl: impl["block_thomas"](
            *(lambda g, d, u: (d, u, -g))(*impl["newton_assemble"](x, dt, gm, gj, c, 1, hg, hh))
        ),
    }

    backends = sorted(kernels.IMPLEMENTATIONS)
    print(f"active backend: {kernels.backend_name()}   (set GRAVCLOCK_DISABLE_NUMBA=1 for numpy)")
    print(f"samples={n}  segments={m}  repeat={args.repeat}\n")
    header = f"{'kernel':<26}" + "".join(f"{b:>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, runner in cases.items():
        times = {}
        for backend in backends:
            impl = kernels.IMPLEMENTATIONS[backend]
            runner(impl)  # warm up (JIT compile on first call)
            times[backend] = _time(lambda: runner(impl), args.repeat)
        line = f"{name:<26}" + "".join(f"{times[b] * 1e3:>12.3f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
