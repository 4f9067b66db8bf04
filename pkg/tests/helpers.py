"""Shared test utilities: seeded case generation and brute-force oracles."""

import math

import numpy as np

from gammafit._kernels import splitmix64_next, unit_uniform
from gammafit.experiment import derive_seed
from gammafit.model import GammaParams, profile_log_likelihood, sample


def log_uniform(u, lo, hi):
    return lo * math.exp(u * math.log(hi / lo))


def random_cases(count, n, master_seed,
                 shape_range=(0.5, 20.0), scale_range=(0.1, 50.0)):
    """Seeded (true_params, sample) pairs mirroring the harness draw policy."""
    cases = []
    for k in range(count):
        seed = derive_seed(master_seed, n, k)
        state, z = splitmix64_next(seed)
        a = log_uniform(unit_uniform(z), *shape_range)
        state, z = splitmix64_next(state)
        b = log_uniform(unit_uniform(z), *scale_range)
        true = GammaParams(a, b)
        state, sub = splitmix64_next(state)
        cases.append((true, sample(true, n, sub)))
    return cases


def profile_argmax(s, lo=1e-2, hi=1e3, grid_points=400, golden_iters=120):
    """Brute-force maximizer of the profiled log likelihood.

    Log-spaced grid scan to bracket the peak, then golden-section
    refinement.  Independent of the fixed-point estimators it checks.
    """
    grid = np.geomspace(lo, hi, grid_points)
    vals = np.array([profile_log_likelihood(s, a) for a in grid])
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid_points - 1)]
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = profile_log_likelihood(s, c), profile_log_likelihood(s, d)
    for _ in range(golden_iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = profile_log_likelihood(s, c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = profile_log_likelihood(s, d)
    return 0.5 * (a + b)
