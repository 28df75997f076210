"""Time the numba and pure-numpy kernel paths on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 26] [--j 13] [--k 3] [--samples 200000]
"""

import argparse
import time

import numpy as np

from ccp import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - t0)
    return min(times), value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=26)
    ap.add_argument("--j", type=int, default=13)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--c", type=int, default=10)
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")

    rng = np.random.default_rng(0)
    w = rng.random(args.n) + 0.1
    p = w / w.sum()
    cum = np.cumsum(p)
    cum[-1] = 1.0

    # warm up the jit outside the timed region
    _kernels.power_sum(p[:4], 2, args.k, use_numba=True)
    _kernels.collect(cum, 2, 10, 1000, np.random.default_rng(0), use_numba=True)

    print(f"{'kernel':<10} {'path':<6} {'seconds':>10}  result")
    for name in ("numba", "numpy"):
        use = name == "numba"
        t, v = best_of(lambda: _kernels.power_sum(p, args.j, args.k, use_numba=use), args.repeat)
        print(f"{'powersum':<10} {name:<6} {t:>10.4f}  {v!r}")
    for name in ("numba", "numpy"):
        use = name == "numba"
        t, v = best_of(
            lambda: _kernels.collect(cum, args.c, args.samples, 1000 * args.n, np.random.default_rng(1), use_numba=use),
            args.repeat,
        )
        print(f"{'collect':<10} {name:<6} {t:>10.4f}  mean={v.mean():.4f}")


if __name__ == "__main__":
    main()
