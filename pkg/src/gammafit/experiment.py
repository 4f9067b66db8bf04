"""Monte Carlo experiment driver: bias and timing sweeps plus curve tables.

Seeding policy: every replication owns a seed derived from
``(master_seed, n, replication_index)`` by a splitmix64 fold, so
replications are independent, order-insensitive and bit-reproducible.
The per-replication stream draws the true parameters (log-uniform over the
configured ranges), then a sub-seed for the observation sample.

The record list is canonically ordered by (n, replication_index, method),
so any parallel execution of replications would produce identical bytes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._kernels import splitmix64_next, unit_uniform  # pure path: seeds are not hot
from .analysis import BiasSummary, PairedTestResult, bias, paired_t_test
from .errors import DomainError
from .estimators import (
    METHOD_ORDER,
    ConvergenceConfig,
    FitResult,
    Method,
    RatePrior,
    ShapePriorBL1,
    ShapePriorBL2,
    bl1_log_prior,
    fit,
    fit_bl1,
    fit_mm,
)
from .model import RNG_ALGORITHM, GammaParams, Sample, kl_divergence, sample

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "ExperimentResult",
    "RunDiagnostics",
    "CurveTable",
    "derive_seed",
    "run_bias_experiment",
    "run_timing_experiment",
    "emit_prior_posterior_curves",
    "default_curve_grid",
    "RECORD_COLUMNS",
    "SUMMARY_COLUMNS",
    "write_records_csv",
    "read_records_csv",
    "summarize_bias_records",
    "summarize_timing_records",
    "write_summary_csv",
    "write_diagnostics_json",
]

_MASK64 = 0xFFFFFFFFFFFFFFFF
MAX_REDRAWS = 100

ALL_METHODS = tuple(Method)


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition shared by the bias and timing experiments."""

    sample_sizes: tuple[int, ...]
    replications: int = 500
    master_seed: int = 0
    methods: tuple[Method, ...] = ALL_METHODS
    true_shape_range: tuple[float, float] = (0.5, 20.0)
    true_scale_range: tuple[float, float] = (0.1, 50.0)
    rate_prior: RatePrior = RatePrior()
    bl1_prior: ShapePriorBL1 = ShapePriorBL1()
    bl2_prior: ShapePriorBL2 = ShapePriorBL2()
    rel_tol: float = 1e-6
    max_iter: int = 1000

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sample_sizes)
        object.__setattr__(self, "sample_sizes", sizes)
        if not sizes:
            raise DomainError("sample_sizes must not be empty")
        if any(n < 2 for n in sizes):
            raise DomainError("every sample size must be at least 2")
        if len(set(sizes)) != len(sizes):
            raise DomainError("sample_sizes must be unique")
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        methods = tuple(Method(m) for m in self.methods)
        object.__setattr__(self, "methods", methods)
        if not methods or len(set(methods)) != len(methods):
            raise DomainError("methods must be a non-empty set of estimators")
        for name in ("true_shape_range", "true_scale_range"):
            lo, hi = getattr(self, name)
            if not (0.0 < lo <= hi) or not math.isfinite(hi):
                raise DomainError(f"{name} must satisfy 0 < lo <= hi")
        ConvergenceConfig(self.rel_tol, self.max_iter)  # validates

    @property
    def convergence(self) -> ConvergenceConfig:
        return ConvergenceConfig(self.rel_tol, self.max_iter)


@dataclass(frozen=True)
class ExperimentRecord:
    """One (replication, method) outcome."""

    method: Method
    n: int
    replication_index: int
    seed: int
    true_shape: float
    true_scale: float
    est_shape: float
    est_scale: float
    kl: float
    iterations: int
    converged: bool
    wall_time_seconds: float


@dataclass
class RunDiagnostics:
    """Sidecar bookkeeping: degenerate-sample redraw counts."""

    redraws_total: int = 0
    redraws: dict = field(default_factory=dict)  # "n:replication" -> count

    def record(self, n: int, rep: int, count: int) -> None:
        if count:
            self.redraws_total += count
            self.redraws[f"{n}:{rep}"] = count


@dataclass(frozen=True)
class ExperimentResult:
    records: list[ExperimentRecord]
    diagnostics: RunDiagnostics


def derive_seed(master_seed: int, *fields: int) -> int:
    """Deterministic 64-bit seed from a master seed and integer coordinates."""
    state = int(master_seed) & _MASK64
    for f in fields:
        _, state = splitmix64_next(state ^ (int(f) & _MASK64))
    return state


def _log_uniform(u: float, lo: float, hi: float) -> float:
    return lo * math.exp(u * math.log(hi / lo))


def _draw_replication(cfg: ExperimentConfig, n: int, rep: int):
    seed = derive_seed(cfg.master_seed, n, rep)
    state = seed
    state, z = splitmix64_next(state)
    true_shape = _log_uniform(unit_uniform(z), *cfg.true_shape_range)
    state, z = splitmix64_next(state)
    true_scale = _log_uniform(unit_uniform(z), *cfg.true_scale_range)
    true = GammaParams(true_shape, true_scale)
    redraws = 0
    while True:
        state, sub_seed = splitmix64_next(state)
        s = sample(true, n, sub_seed)
        if s.variance > 0.0 and s.mean_log < math.log(s.mean):
            return seed, true, s, redraws
        redraws += 1
        if redraws > MAX_REDRAWS:
            raise DomainError(
                f"replication (n={n}, rep={rep}) drew {MAX_REDRAWS} degenerate "
                "samples in a row; check the configured parameter ranges")


def _run(cfg: ExperimentConfig, timed: bool) -> ExperimentResult:
    records: list[ExperimentRecord] = []
    diagnostics = RunDiagnostics()
    ccfg = cfg.convergence
    for n in cfg.sample_sizes:
        for rep in range(cfg.replications):
            seed, true, s, redraws = _draw_replication(cfg, n, rep)
            diagnostics.record(n, rep, redraws)
            for method in cfg.methods:
                elapsed = 0.0
                if timed:
                    t0 = time.perf_counter()
                    res = fit(s, method, rate_prior=cfg.rate_prior,
                              bl1_prior=cfg.bl1_prior, bl2_prior=cfg.bl2_prior,
                              cfg=ccfg)
                    elapsed = time.perf_counter() - t0
                else:
                    res = fit(s, method, rate_prior=cfg.rate_prior,
                              bl1_prior=cfg.bl1_prior, bl2_prior=cfg.bl2_prior,
                              cfg=ccfg)
                records.append(ExperimentRecord(
                    method=method, n=n, replication_index=rep, seed=seed,
                    true_shape=true.shape, true_scale=true.scale,
                    est_shape=res.params.shape, est_scale=res.params.scale,
                    kl=kl_divergence(true, res.params),
                    iterations=res.iterations, converged=res.converged,
                    wall_time_seconds=elapsed))
    records.sort(key=lambda r: (r.n, r.replication_index, METHOD_ORDER[r.method]))
    return ExperimentResult(records, diagnostics)


def run_bias_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Fit every configured method on shared per-replication samples.

    Wall time is not measured here (the column is zero) so the output is
    byte-reproducible.
    """
    return _run(cfg, timed=False)


def run_timing_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Same sweep with wall-clock timing around each fit call only."""
    return _run(cfg, timed=True)


# ---------------------------------------------------------------------------
# prior/posterior curve tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveTable:
    """Log prior/posterior of the BL1 shape parameter over a grid.

    Both columns are shifted so their maxima sit at zero (the densities are
    unnormalized, so the constant is arbitrary).
    """

    alpha: np.ndarray
    log_prior: np.ndarray
    log_posterior: np.ndarray
    fit: FitResult


def default_curve_grid(s: Sample, points: int = 512) -> np.ndarray:
    """Log-spaced grid spanning a decade either side of the moment shape."""
    if points < 2:
        raise DomainError("grid needs at least 2 points")
    alpha0 = fit_mm(s).params.shape
    return np.geomspace(alpha0 / 10.0, alpha0 * 10.0, points)


def emit_prior_posterior_curves(shape_prior: ShapePriorBL1,
                                rate_prior: RatePrior,
                                s: Sample,
                                grid: Sequence[float],
                                cfg: Optional[ConvergenceConfig] = None) -> CurveTable:
    """Evaluate the BL1 log prior and log posterior over a shape grid."""
    alphas = np.asarray(grid, dtype=np.float64)
    if alphas.size == 0:
        raise DomainError("grid must not be empty")
    if np.any(alphas <= 0.0) or not np.all(np.isfinite(alphas)):
        raise DomainError("grid values must be positive and finite")
    if np.any(np.diff(alphas) <= 0.0):
        raise DomainError("grid values must be strictly increasing")

    res = fit_bl1(s, shape_prior, rate_prior,
                  cfg if cfg is not None else ConvergenceConfig())
    post = res.posterior
    posterior_prior = ShapePriorBL1(log_a=post.log_a_hat, b=post.b_hat, c=post.c_hat)
    rate_prior_mean = rate_prior.d / rate_prior.e
    rate_post_mean = post.d_hat / post.e_hat

    log_prior = np.array([bl1_log_prior(a, shape_prior, rate_prior_mean)
                          for a in alphas])
    log_post = np.array([bl1_log_prior(a, posterior_prior, rate_post_mean)
                         for a in alphas])
    return CurveTable(alphas, log_prior - log_prior.max(),
                      log_post - log_post.max(), res)


# ---------------------------------------------------------------------------
# CSV / JSON persistence
# ---------------------------------------------------------------------------

RECORD_COLUMNS = ("method", "n", "replication_index", "seed", "true_shape",
                  "true_scale", "est_shape", "est_scale", "kl", "iterations",
                  "converged", "wall_time_seconds")

SUMMARY_COLUMNS = ("kind", "method_a", "method_b", "n", "param", "mean_bias",
                   "sd_bias", "replications", "t_statistic",
                   "degrees_of_freedom", "p_value", "median_iterations",
                   "median_wall_time_seconds")


def format_float(v: float) -> str:
    """17 significant digits: lossless float64 round trip."""
    return format(float(v), ".17g")


def _record_line(r: ExperimentRecord) -> str:
    return ",".join((
        r.method.value, str(r.n), str(r.replication_index), str(r.seed),
        format_float(r.true_shape), format_float(r.true_scale),
        format_float(r.est_shape), format_float(r.est_scale),
        format_float(r.kl), str(r.iterations),
        "true" if r.converged else "false",
        format_float(r.wall_time_seconds)))


def write_records_csv(path, records: Sequence[ExperimentRecord],
                      comments: Sequence[str] = ()) -> None:
    lines = [f"# {c}" for c in (f"rng: {RNG_ALGORITHM}", *comments)]
    lines.append(",".join(RECORD_COLUMNS))
    lines.extend(_record_line(r) for r in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_records_csv(path) -> list[ExperimentRecord]:
    records = []
    header = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = tuple(line.split(","))
            if header != RECORD_COLUMNS:
                raise DomainError(f"unexpected records header: {header}")
            continue
        f = line.split(",")
        records.append(ExperimentRecord(
            method=Method(f[0]), n=int(f[1]), replication_index=int(f[2]),
            seed=int(f[3]), true_shape=float(f[4]), true_scale=float(f[5]),
            est_shape=float(f[6]), est_scale=float(f[7]), kl=float(f[8]),
            iterations=int(f[9]), converged=(f[10] == "true"),
            wall_time_seconds=float(f[11])))
    if header is None:
        raise DomainError(f"{path} holds no records header")
    return records


def _grouped(records: Sequence[ExperimentRecord]):
    groups: dict[tuple[int, Method], list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.method), []).append(r)
    for recs in groups.values():
        recs.sort(key=lambda r: r.replication_index)
    return groups


def summarize_bias_records(records: Sequence[ExperimentRecord]
                           ) -> tuple[list[BiasSummary], list[PairedTestResult]]:
    """BiasSummary per (method, n, parameter) plus paired t-tests on KL for
    every method pair at every n."""
    groups = _grouped(records)
    sizes = sorted({n for n, _ in groups})
    methods = [m for m in Method if any((n, m) in groups for n in sizes)]

    bias_rows: list[BiasSummary] = []
    t_rows: list[PairedTestResult] = []
    for n in sizes:
        for m in methods:
            recs = groups.get((n, m))
            if not recs or len(recs) < 2:
                continue
            pairs = [(GammaParams(r.true_shape, r.true_scale),
                      GammaParams(r.est_shape, r.est_scale)) for r in recs]
            bias_rows.extend(bias(pairs, method=m, n=n))
        for i, ma in enumerate(methods):
            for mb in methods[i + 1:]:
                ra, rb = groups.get((n, ma)), groups.get((n, mb))
                if not ra or not rb or len(ra) != len(rb) or len(ra) < 2:
                    continue
                t_rows.append(paired_t_test(
                    [r.kl for r in ra], [r.kl for r in rb],
                    method_a=ma, method_b=mb, n=n))
    return bias_rows, t_rows


@dataclass(frozen=True)
class TimingSummary:
    method: Method
    n: int
    replications: int
    median_iterations: float
    median_wall_time_seconds: float


def summarize_timing_records(records: Sequence[ExperimentRecord]
                             ) -> list[TimingSummary]:
    groups = _grouped(records)
    rows = []
    for (n, m), recs in sorted(groups.items(),
                               key=lambda kv: (kv[0][0], METHOD_ORDER[kv[0][1]])):
        rows.append(TimingSummary(
            method=m, n=n, replications=len(recs),
            median_iterations=float(np.median([r.iterations for r in recs])),
            median_wall_time_seconds=float(
                np.median([r.wall_time_seconds for r in recs]))))
    return rows


def write_summary_csv(path,
                      bias_rows: Sequence[BiasSummary] = (),
                      t_rows: Sequence[PairedTestResult] = (),
                      timing_rows: Sequence[TimingSummary] = ()) -> None:
    lines = [",".join(SUMMARY_COLUMNS)]
    for b in bias_rows:
        lines.append(",".join((
            "bias", b.method.value if b.method else "", "",
            str(b.n) if b.n is not None else "", b.param,
            format_float(b.mean_bias), format_float(b.sd_bias),
            str(b.replications), "", "", "", "", "")))
    for t in t_rows:
        lines.append(",".join((
            "paired_t", t.method_a.value if t.method_a else "",
            t.method_b.value if t.method_b else "",
            str(t.n) if t.n is not None else "", "kl", "", "", "",
            format_float(t.t_statistic), str(t.degrees_of_freedom),
            format_float(t.p_value), "", "")))
    for row in timing_rows:
        lines.append(",".join((
            "timing", row.method.value, "", str(row.n), "", "", "",
            str(row.replications), "", "", "",
            format_float(row.median_iterations),
            format_float(row.median_wall_time_seconds))))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_diagnostics_json(path, cfg: ExperimentConfig,
                           diagnostics: RunDiagnostics) -> None:
    payload = {
        "rng": RNG_ALGORITHM,
        "master_seed": cfg.master_seed,
        "sample_sizes": list(cfg.sample_sizes),
        "replications": cfg.replications,
        "methods": [m.value for m in cfg.methods],
        "redraws_total": diagnostics.redraws_total,
        "redraws": diagnostics.redraws,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8", newline="\n")
