"""Log-gamma family special functions and the regularized incomplete beta.

These scalar primitives are what every estimator iterates on: ``digamma``
and ``trigamma`` drive the shape updates, ``inverse_digamma`` solves the
fixed-point equations, and ``regularized_incomplete_beta`` supplies the
Student-t tail probability used by the paired test in :mod:`analysis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import backend
from .errors import ConvergenceError, DomainError

__all__ = [
    "SpecFunConfig",
    "DEFAULT_CONFIG",
    "log_gamma",
    "digamma",
    "trigamma",
    "inverse_digamma",
    "regularized_incomplete_beta",
]


@dataclass(frozen=True)
class SpecFunConfig:
    """Newton iteration settings for :func:`inverse_digamma`.

    The default tolerance is two orders of magnitude tighter than the
    estimators' outer fixed-point tolerance so the inner solve never
    dominates the error budget.
    """

    newton_tol: float = 1e-12
    newton_max_iter: int = 100

    def __post_init__(self):
        if not (math.isfinite(self.newton_tol) and self.newton_tol > 0.0):
            raise DomainError("newton_tol must be positive and finite")
        if self.newton_max_iter < 1:
            raise DomainError("newton_max_iter must be at least 1")


DEFAULT_CONFIG = SpecFunConfig()


def _checked_positive(name: str, x) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function, for x > 0."""
    return backend.kernels.log_gamma(_checked_positive("x", x))


def digamma(x: float) -> float:
    """Psi(x), the logarithmic derivative of Gamma, for x > 0."""
    return backend.kernels.digamma(_checked_positive("x", x))


def trigamma(x: float) -> float:
    """Psi'(x), the derivative of digamma, for x > 0."""
    return backend.kernels.trigamma(_checked_positive("x", x))


def inverse_digamma(y: float, cfg: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """The monotone inverse of digamma: the x > 0 with Psi(x) = y."""
    y = float(y)
    if not math.isfinite(y):
        raise DomainError(f"y must be finite, got {y!r}")
    x, converged = backend.kernels.inverse_digamma(
        y, cfg.newton_tol, cfg.newton_max_iter)
    if not converged:
        raise ConvergenceError(
            f"inverse_digamma({y}) did not reach tol={cfg.newton_tol} "
            f"within {cfg.newton_max_iter} Newton steps", last_iterate=x)
    return x


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    a = _checked_positive("a", a)
    b = _checked_positive("b", b)
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return backend.kernels.betainc(a, b, x)
