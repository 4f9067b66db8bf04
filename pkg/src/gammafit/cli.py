"""Command-line surface: ``fit``, ``sample``, ``bench bias``, ``bench timing``
and ``curves``.

Exit codes: 0 success, 2 input validation, 3 numerical failure under
``--strict``, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    IllPosedPosteriorError,
    InsufficientDataError,
    NumericalAnomalyError,
)
from .estimators import (
    ConvergenceConfig,
    FitResult,
    Method,
    RatePrior,
    ShapePriorBL1,
    ShapePriorBL2,
    fit,
)
from .experiment import (
    ExperimentConfig,
    default_curve_grid,
    emit_prior_posterior_curves,
    format_float,
    run_bias_experiment,
    run_timing_experiment,
    summarize_bias_records,
    summarize_timing_records,
    write_diagnostics_json,
    write_records_csv,
    write_summary_csv,
)
from .model import GammaParams, Sample, sample as draw_sample

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_INPUT_ERRORS = (DomainError, InsufficientDataError, DegenerateSampleError)
_NUMERICAL_ERRORS = (ConvergenceError, IllPosedPosteriorError,
                     NumericalAnomalyError)


class StrictConvergenceFailure(RuntimeError):
    """A fit did not converge and --strict was requested."""


def read_positive_csv(path) -> Sample:
    """Read one positive real per line; optional ``x`` header; blank lines
    ignored. Any non-positive or non-numeric row aborts, naming the row."""
    text = Path(path).read_text(encoding="utf-8")
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if lineno == 1 and line.lower() == "x":
            continue
        try:
            v = float(line)
        except ValueError:
            raise DomainError(f"{path}: row {lineno}: not a number: {line!r}")
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"{path}: row {lineno}: value must be positive "
                              f"and finite, got {line!r}")
        values.append(v)
    if not values:
        raise DomainError(f"{path}: no observations found")
    return Sample.from_values(values)


def _add_hyper_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=float, default=0.001,
                   help="rate prior shape (default 0.001)")
    p.add_argument("--e", type=float, default=0.001,
                   help="rate prior rate (default 0.001)")
    p.add_argument("--a", type=float, default=1.0,
                   help="BL1 shape prior a (default 1)")
    p.add_argument("--b", type=float, default=0.001,
                   help="BL1 shape prior b (default 0.001)")
    p.add_argument("--c", type=float, default=0.001,
                   help="BL1 shape prior c (default 0.001)")
    p.add_argument("--w0", type=float, default=1.0,
                   help="BL2 prior constant coefficient (default 1)")
    p.add_argument("--w1", type=float, default=0.0,
                   help="BL2 prior linear coefficient (default 0)")
    p.add_argument("--w2", type=float, default=0.0,
                   help="BL2 prior log coefficient (default 0)")


def _add_convergence_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-6,
                   help="relative shape-change tolerance (default 1e-6)")
    p.add_argument("--max-iter", type=int, default=1000,
                   help="iteration budget (default 1000)")


def _priors_from_args(args):
    if args.a <= 0.0 or not math.isfinite(args.a):
        raise DomainError(f"--a must be positive and finite, got {args.a!r}")
    return (RatePrior(args.d, args.e),
            ShapePriorBL1(log_a=math.log(args.a), b=args.b, c=args.c),
            ShapePriorBL2(w0=args.w0, w1=args.w1, w2=args.w2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammafit",
        description="Gamma distribution estimators and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one estimator to a CSV of values")
    p_fit.add_argument("--method", required=True,
                       choices=[m.value for m in Method])
    p_fit.add_argument("--input", required=True, help="CSV, one value per line")
    p_fit.add_argument("--strict", action="store_true",
                       help="exit 3 if the fit does not converge")
    _add_convergence_flags(p_fit)
    _add_hyper_flags(p_fit)

    p_sample = sub.add_parser("sample", help="draw a seeded Gamma sample")
    p_sample.add_argument("--shape", type=float, required=True)
    p_sample.add_argument("--scale", type=float, required=True)
    p_sample.add_argument("-n", "--size", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", help="output CSV (default: stdout)")

    p_bench = sub.add_parser("bench", help="Monte Carlo sweeps")
    bench_sub = p_bench.add_subparsers(dest="bench_kind", required=True)
    for kind, blurb in (("bias", "bias/KL replication sweep"),
                        ("timing", "iteration/wall-time sweep")):
        bp = bench_sub.add_parser(kind, help=blurb)
        bp.add_argument("--sizes", required=True,
                        help="comma-separated sample sizes, e.g. 10,100")
        bp.add_argument("--reps", type=int, default=500,
                        help="replications per size (default 500)")
        bp.add_argument("--seed", type=int, default=0, help="master seed")
        bp.add_argument("--out", required=True, help="output directory")
        bp.add_argument("--methods", default="mm,ml1,ml2,bl1,bl2",
                        help="comma-separated estimator subset")
        bp.add_argument("--shape-range", default="0.5,20",
                        help="true shape range LO,HI (log-uniform)")
        bp.add_argument("--scale-range", default="0.1,50",
                        help="true scale range LO,HI (log-uniform)")
        _add_convergence_flags(bp)
        _add_hyper_flags(bp)

    p_curves = sub.add_parser(
        "curves", help="BL1 log prior/posterior over a shape grid")
    p_curves.add_argument("--input", required=True, help="CSV of observations")
    p_curves.add_argument("--grid-points", type=int, default=512)
    p_curves.add_argument("--grid-lo", type=float,
                          help="grid lower end (default: moment shape / 10)")
    p_curves.add_argument("--grid-hi", type=float,
                          help="grid upper end (default: moment shape * 10)")
    p_curves.add_argument("--out", help="output CSV (default: stdout)")
    _add_convergence_flags(p_curves)
    _add_hyper_flags(p_curves)

    return parser


def _fit_payload(res: FitResult) -> dict:
    posterior = None
    if res.posterior is not None:
        posterior = {k: v for k, v in vars(res.posterior).items()
                     if v is not None}
    return {
        "method": res.method.value,
        "shape": res.params.shape,
        "scale": res.params.scale,
        "iterations": res.iterations,
        "converged": res.converged,
        "posterior": posterior,
        "laplace_precision": res.laplace_precision,
    }


def _cmd_fit(args, out) -> int:
    s = read_positive_csv(args.input)
    rate_prior, bl1_prior, bl2_prior = _priors_from_args(args)
    res = fit(s, Method(args.method), rate_prior=rate_prior,
              bl1_prior=bl1_prior, bl2_prior=bl2_prior,
              cfg=ConvergenceConfig(args.tol, args.max_iter))
    print(json.dumps(_fit_payload(res)), file=out)
    if args.strict and not res.converged:
        raise StrictConvergenceFailure(
            f"{args.method} did not converge within {args.max_iter} iterations")
    return EXIT_OK


def _cmd_sample(args, out) -> int:
    s = draw_sample(GammaParams(args.shape, args.scale), args.size, args.seed)
    lines = ["x"] + [format_float(v) for v in s.values]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        out.write(text)
    return EXIT_OK


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise DomainError(f"{flag} expects comma-separated integers, got {text!r}")


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    toks = [tok for tok in text.split(",") if tok.strip()]
    if len(toks) != 2:
        raise DomainError(f"{flag} expects LO,HI, got {text!r}")
    try:
        return float(toks[0]), float(toks[1])
    except ValueError:
        raise DomainError(f"{flag} expects numbers, got {text!r}")


def _cmd_bench(args, out) -> int:
    try:
        methods = tuple(Method(tok.strip()) for tok in args.methods.split(",")
                        if tok.strip())
    except ValueError:
        raise DomainError(f"--methods holds an unknown estimator: {args.methods!r}")
    rate_prior, bl1_prior, bl2_prior = _priors_from_args(args)
    cfg = ExperimentConfig(
        sample_sizes=_parse_int_list(args.sizes, "--sizes"),
        replications=args.reps,
        master_seed=args.seed,
        methods=methods,
        true_shape_range=_parse_range(args.shape_range, "--shape-range"),
        true_scale_range=_parse_range(args.scale_range, "--scale-range"),
        rate_prior=rate_prior, bl1_prior=bl1_prior, bl2_prior=bl2_prior,
        rel_tol=args.tol, max_iter=args.max_iter)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.bench_kind == "bias":
        result = run_bias_experiment(cfg)
        comments = ("timing: not measured in the bias sweep (column is zero)",)
        bias_rows, t_rows = summarize_bias_records(result.records)
        write_summary_csv(out_dir / "summary.csv", bias_rows, t_rows)
    else:
        result = run_timing_experiment(cfg)
        comments = ("timing: wall clock around each fit call only; sampling and "
                    "I/O excluded; moment initialization runs on cached "
                    "statistics inside the fit",)
        write_summary_csv(out_dir / "summary.csv",
                          timing_rows=summarize_timing_records(result.records))
    write_records_csv(out_dir / "records.csv", result.records, comments)
    write_diagnostics_json(out_dir / "diagnostics.json", cfg, result.diagnostics)
    print(f"wrote {len(result.records)} records to {out_dir}", file=out)
    return EXIT_OK


def _cmd_curves(args, out) -> int:
    s = read_positive_csv(args.input)
    rate_prior, bl1_prior, _ = _priors_from_args(args)
    if (args.grid_lo is None) != (args.grid_hi is None):
        raise DomainError("--grid-lo and --grid-hi must be given together")
    if args.grid_lo is not None:
        if not (0.0 < args.grid_lo < args.grid_hi):
            raise DomainError("grid bounds must satisfy 0 < lo < hi")
        grid = np.geomspace(args.grid_lo, args.grid_hi, args.grid_points)
    else:
        grid = default_curve_grid(s, args.grid_points)
    table = emit_prior_posterior_curves(
        bl1_prior, rate_prior, s, grid,
        cfg=ConvergenceConfig(args.tol, args.max_iter))
    lines = ["alpha,log_prior,log_posterior"]
    lines.extend(
        f"{format_float(a)},{format_float(lp)},{format_float(lq)}"
        for a, lp, lq in zip(table.alpha, table.log_prior, table.log_posterior))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        out.write(text)
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _cmd_fit(args, out)
        if args.command == "sample":
            return _cmd_sample(args, out)
        if args.command == "bench":
            return _cmd_bench(args, out)
        return _cmd_curves(args, out)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StrictConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
