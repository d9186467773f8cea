"""Compare the compiled and pure-Python accumulation kernels.

Usage: python3 benchmarks/bench_kernels.py [--nodes N] [--repeat R]

Times ``frame_accumulate`` on frame-sized blocks and ``weighted_sum`` on a
long vector, for every available backend, and reports the largest
difference between backends.
"""
import argparse
import time

import numpy as np

from vcslab import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nodes", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"backends: {', '.join(sorted(kernels.BACKENDS))}")
    for d, q in ((8, 2), (16, 4), (28, 4)):
        g = rng.normal(size=(args.nodes, d, q)) + 1j * rng.normal(size=(args.nodes, d, q))
        g = np.ascontiguousarray(g)
        w = rng.random(args.nodes)
        results = {}
        for name, mod in sorted(kernels.BACKENDS.items()):
            dt, out = best_of(lambda: mod.frame_accumulate(g, w), args.repeat)
            results[name] = out
            print(f"frame_accumulate nodes={args.nodes} D={d} q={q} {name:>7}: {dt * 1e3:9.2f} ms")
        vals = list(results.values())
        if len(vals) > 1:
            print(f"  max backend difference {np.max(np.abs(vals[0] - vals[1])):.2e}")
    n = 50 * args.nodes
    re, im, w = rng.normal(size=n), rng.normal(size=n), rng.random(n)
    for name, mod in sorted(kernels.BACKENDS.items()):
        dt, out = best_of(lambda: mod.weighted_sum(re, im, w), args.repeat)
        print(f"weighted_sum n={n} {name:>7}: {dt * 1e3:9.2f} ms  value={out[0]:.15g}")


if __name__ == "__main__":
    main()
