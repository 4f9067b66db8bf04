"""Scalar numerical kernels shared by both execution backends.

Everything in this module runs unchanged as plain Python (the ``numpy``
backend) and also compiles under ``numba.njit`` (see ``_numba_kernels``).
Keep the code restricted to scalar math, explicit loops and ``np.empty``:
no Python objects, no exceptions, no closures.

Unsigned 64-bit arithmetic is written as plain ints masked to 64 bits.
Under numba the same expressions are typed ``uint64`` (where the mask is
a no-op) and both paths produce bit-identical streams; this is asserted
by ``tests/test_backends.py``.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba.extending import register_jitable
except ImportError:  # pragma: no cover - only hit when numba is absent

    def register_jitable(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda func: func


EULER_GAMMA = 0.5772156649015328606065121
HALF_LOG_TWO_PI = 0.9189385332046727417803297
TWO_PI = 6.2831853071795864769252868

_MASK64 = 0xFFFFFFFFFFFFFFFF


# ---------------------------------------------------------------------------
# log-gamma family
# ---------------------------------------------------------------------------

@register_jitable
def log_gamma(x):
    """ln Gamma(x) for x > 0 via upward recurrence plus Stirling's series."""
    acc = 0.0
    while x < 10.0:
        acc -= math.log(x)
        x += 1.0
    r = 1.0 / (x * x)
    series = (1.0 / 12.0 + r * (-1.0 / 360.0 + r * (1.0 / 1260.0
              + r * (-1.0 / 1680.0 + r * (1.0 / 1188.0
              + r * (-691.0 / 360360.0 + r * (1.0 / 156.0)))))))
    return acc + (x - 0.5) * math.log(x) - x + HALF_LOG_TWO_PI + series / x


@register_jitable
def digamma(x):
    """Psi(x) for x > 0: shift to x >= 6, then the asymptotic series."""
    acc = 0.0
    while x < 6.0:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    series = r * (1.0 / 12.0 + r * (-1.0 / 120.0 + r * (1.0 / 252.0
              + r * (-1.0 / 240.0 + r * (1.0 / 132.0
              + r * (-691.0 / 32760.0 + r * (1.0 / 12.0
              + r * (-3617.0 / 8160.0 + r * (43867.0 / 14364.0
              + r * (-174611.0 / 6600.0))))))))))
    return acc + math.log(x) - 0.5 / x - series


@register_jitable
def trigamma(x):
    """Psi'(x) for x > 0: shift to x >= 6, then the asymptotic series."""
    acc = 0.0
    while x < 6.0:
        acc += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / (x * x)
    series = r * (1.0 / 6.0 + r * (-1.0 / 30.0 + r * (1.0 / 42.0
              + r * (-1.0 / 30.0 + r * (5.0 / 66.0
              + r * (-691.0 / 2730.0 + r * (7.0 / 6.0
              + r * (-3617.0 / 510.0 + r * (43867.0 / 798.0
              + r * (-174611.0 / 330.0))))))))))
    return acc + 1.0 / x + 0.5 * r + series / x


@register_jitable
def inverse_digamma(y, tol, max_iter):
    """Solve Psi(x) = y by Newton iteration.

    Returns ``(x, converged)``; convergence means
    ``|Psi(x) - y| <= tol * max(1, |y|)``.
    """
    if y >= -2.22:
        x = math.exp(y) + 0.5
    else:
        x = -1.0 / (y + EULER_GAMMA)
    converged = False
    steps = 0
    while True:
        err = digamma(x) - y
        bound = abs(y) if abs(y) > 1.0 else 1.0
        if abs(err) <= tol * bound:
            converged = True
            break
        if steps >= max_iter:
            break
        step = err / trigamma(x)
        nxt = x - step
        retries = 0
        while not (nxt > 0.0 and math.isfinite(nxt)) and retries < 200:
            step *= 0.5
            nxt = x - step
            retries += 1
        if retries >= 200:
            break
        x = nxt
        steps += 1
    return x, converged


# ---------------------------------------------------------------------------
# regularized incomplete beta
# ---------------------------------------------------------------------------

@register_jitable
def _beta_cf(a, b, x):
    # Lentz's continued-fraction evaluation; converges for x < (a+1)/(a+b+2)
    max_it = 300
    eps = 3.0e-16
    fpmin = 1.0e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_it + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= eps:
            break
    return h


@register_jitable
def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (log_gamma(a + b) - log_gamma(a) - log_gamma(b)
                + a * math.log(x) + b * math.log(1.0 - x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


# ---------------------------------------------------------------------------
# seeded PRNG and Gamma sampling
# ---------------------------------------------------------------------------

@register_jitable
def splitmix64_next(state):
    """One splitmix64 step: returns ``(next_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return state, z


@register_jitable
def unit_uniform(z):
    """Map a 64-bit word to the open-closed interval (0, 1]."""
    return ((z >> 11) + 1) * (2.0 ** -53)


@register_jitable
def standard_normal_step(state):
    # Box-Muller, cosine branch only; two words per normal keeps the
    # generator stateless apart from the integer stream position.
    state, z1 = splitmix64_next(state)
    state, z2 = splitmix64_next(state)
    r = math.sqrt(-2.0 * math.log(unit_uniform(z1)))
    return state, r * math.cos(TWO_PI * unit_uniform(z2))


@register_jitable
def gamma_fill(n, alpha, state):
    """Fill an array with ``n`` standard-Gamma(alpha) draws.

    Marsaglia-Tsang squeeze method; shapes below one use the draw for
    alpha + 1 boosted by U^(1/alpha).  Returns ``(draws, final_state)``.
    """
    out = np.empty(n)
    boost = alpha < 1.0
    d = (alpha + 1.0 if boost else alpha) - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    for i in range(n):
        g = 0.0
        while g <= 0.0:
            while True:
                state, x = standard_normal_step(state)
                v = 1.0 + c * x
                if v <= 0.0:
                    continue
                v = v * v * v
                state, z = splitmix64_next(state)
                u = unit_uniform(z)
                x2 = x * x
                if u < 1.0 - 0.0331 * x2 * x2:
                    g = d * v
                    break
                if math.log(u) < 0.5 * x2 + d * (1.0 - v + math.log(v)):
                    g = d * v
                    break
            if boost:
                state, z = splitmix64_next(state)
                g *= unit_uniform(z) ** (1.0 / alpha)
        out[i] = g
    return out, state
