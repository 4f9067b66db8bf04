"""Replication-level statistics: bias aggregation, paired t-tests, KL tables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError
from .estimators import Method
from .model import GammaParams, kl_divergence
from .specfun import regularized_incomplete_beta

__all__ = [
    "BiasSummary",
    "PairedTestResult",
    "bias",
    "paired_t_test",
    "student_t_two_sided_p",
    "kl_matrix",
]


@dataclass(frozen=True)
class BiasSummary:
    """Mean and spread of (estimate - truth) for one parameter."""

    method: Optional[Method]
    n: Optional[int]
    param: str  # "shape" or "scale"
    mean_bias: float
    sd_bias: float
    replications: int


@dataclass(frozen=True)
class PairedTestResult:
    """Two-sided paired t-test outcome."""

    method_a: Optional[Method]
    method_b: Optional[Method]
    n: Optional[int]
    t_statistic: float
    degrees_of_freedom: int
    p_value: float


def bias(estimates: Sequence[tuple[GammaParams, GammaParams]], *,
         method: Optional[Method] = None,
         n: Optional[int] = None) -> tuple[BiasSummary, BiasSummary]:
    """Aggregate (truth, estimate) pairs into shape and scale bias summaries.

    ``method`` and ``n`` only tag the output records; pass them when the
    summaries flow into a results table.
    """
    if len(estimates) < 2:
        raise InsufficientDataError(
            f"bias aggregation needs at least 2 replications, got {len(estimates)}")

    def summarize(param: str, diffs: np.ndarray) -> BiasSummary:
        return BiasSummary(method, n, param,
                           float(np.mean(diffs)), float(np.std(diffs, ddof=1)),
                           len(diffs))

    shape_diffs = np.array([est.shape - true.shape for true, est in estimates])
    scale_diffs = np.array([est.scale - true.scale for true, est in estimates])
    return summarize("shape", shape_diffs), summarize("scale", scale_diffs)


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T_df| >= |t|) via the regularized incomplete beta."""
    if df < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def paired_t_test(x: Sequence[float], y: Sequence[float], *,
                  method_a: Optional[Method] = None,
                  method_b: Optional[Method] = None,
                  n: Optional[int] = None) -> PairedTestResult:
    """Two-sided paired t-test on two equal-length series.

    Degenerate differences follow a total-order convention: identical
    series give p = 1, a constant nonzero difference gives p = 0 with an
    infinite statistic.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise DomainError("paired series must be 1-D and equally long")
    m = xa.size
    if m < 2:
        raise DomainError(f"paired t-test needs at least 2 pairs, got {m}")
    d = xa - ya
    mean_d = float(np.mean(d))
    sd_d = float(np.std(d, ddof=1))
    df = m - 1
    if sd_d == 0.0:
        if mean_d == 0.0:
            t, p = 0.0, 1.0
        else:
            t, p = math.copysign(math.inf, mean_d), 0.0
    else:
        t = mean_d / (sd_d / math.sqrt(m))
        p = student_t_two_sided_p(t, df)
    return PairedTestResult(method_a, method_b, n, t, df, p)


def kl_matrix(true_params: GammaParams,
              fits: Mapping[Method, GammaParams]) -> dict[Method, float]:
    """KL(truth || fitted) for every supplied method."""
    return {m: kl_divergence(true_params, est) for m, est in fits.items()}
