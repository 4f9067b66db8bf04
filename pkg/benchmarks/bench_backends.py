"""Benchmark the numba kernels against the pure-Python/numpy fallback.

Both flavours are imported directly (ignoring GAMMAFIT_BACKEND), timed on
the package's hot paths, and checked for bit-identical output while at it.

Usage:  python benchmarks/bench_backends.py [--draws N] [--repeat K]
"""

import argparse
import math
from time import perf_counter

import numpy as np

from gammafit import _kernels as pure

try:
    from gammafit import _numba_kernels as jit
except ImportError:
    jit = None


def best_of(repeat, fn, *args):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = perf_counter()
        out = fn(*args)
        best = min(best, perf_counter() - t0)
    return best, out


def digamma_sweep(kernels, xs):
    total = 0.0
    for x in xs:
        total += kernels.digamma(x)
    return total


def inverse_digamma_sweep(kernels, ys):
    total = 0.0
    for y in ys:
        x, _ = kernels.inverse_digamma(y, 1e-12, 100)
        total += x
    return total


def betainc_sweep(kernels, triples):
    total = 0.0
    for a, b, x in triples:
        total += kernels.betainc(a, b, x)
    return total


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--draws", type=int, default=200_000,
                        help="gamma variates per sampler timing (default 2e5)")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    args = parser.parse_args()

    xs = [float(v) for v in np.geomspace(1e-3, 1e4, 20_000)]
    ys = [float(v) for v in np.linspace(-8.0, 8.0, 5_000)]
    rng = np.random.default_rng(1)
    triples = [(float(a), float(b), float(x)) for a, b, x in
               zip(rng.uniform(0.1, 30, 2_000), rng.uniform(0.1, 30, 2_000),
                   rng.uniform(0, 1, 2_000))]

    cases = [
        ("digamma x20k", digamma_sweep, (xs,)),
        ("inverse_digamma x5k", inverse_digamma_sweep, (ys,)),
        ("betainc x2k", betainc_sweep, (triples,)),
        ("gamma_fill alpha=2.5", lambda k: k.gamma_fill(args.draws, 2.5, 42), ()),
        ("gamma_fill alpha=0.4", lambda k: k.gamma_fill(args.draws, 0.4, 42), ()),
    ]

    if jit is not None:
        # trigger compilation outside the timed region
        digamma_sweep(jit, xs[:2])
        inverse_digamma_sweep(jit, ys[:2])
        betainc_sweep(jit, triples[:2])
        jit.gamma_fill(10, 2.5, 42)
        jit.gamma_fill(10, 0.4, 42)

    print(f"{'kernel':<26} {'numpy path':>12} {'numba path':>12} {'speedup':>9}")
    for name, fn, extra in cases:
        t_pure, out_pure = best_of(args.repeat, fn, pure, *extra)
        if jit is None:
            print(f"{name:<26} {t_pure * 1e3:>10.1f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_jit, out_jit = best_of(args.repeat, fn, jit, *extra)
        if isinstance(out_pure, tuple):
            same = np.array_equal(out_pure[0], out_jit[0])
        else:
            same = out_pure == out_jit
        flag = "" if same else "  [MISMATCH]"
        print(f"{name:<26} {t_pure * 1e3:>10.1f}ms {t_jit * 1e3:>10.1f}ms "
              f"{t_pure / t_jit:>8.1f}x{flag}")


if __name__ == "__main__":
    main()
