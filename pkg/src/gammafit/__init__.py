"""Gamma-distribution parameter estimation.

Five estimators behind one interface (method of moments, two maximum
likelihood iterations, two conjugate-prior Bayesian fits with Laplace
posterior expectations), a seeded Gamma sampler, KL-based fit quality
metrics, and a Monte Carlo harness reproducing bias, timing and
prior-sensitivity experiments.
"""

from .analysis import (
    BiasSummary,
    PairedTestResult,
    bias,
    kl_matrix,
    paired_t_test,
)
from .backend import backend_name
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
    PosteriorHyperparams,
    RatePrior,
    ShapePriorBL1,
    ShapePriorBL2,
    bl1_log_prior,
    fit,
    fit_bl1,
    fit_bl2,
    fit_ml1,
    fit_ml2,
    fit_mm,
    rate_posterior,
)
from .experiment import (
    CurveTable,
    ExperimentConfig,
    ExperimentRecord,
    ExperimentResult,
    default_curve_grid,
    derive_seed,
    emit_prior_posterior_curves,
    run_bias_experiment,
    run_timing_experiment,
)
from .model import (
    GammaParams,
    RNG_ALGORITHM,
    Sample,
    kl_divergence,
    log_likelihood,
    log_pdf,
    moments,
    profile_log_likelihood,
    sample,
)
from .specfun import (
    SpecFunConfig,
    digamma,
    inverse_digamma,
    log_gamma,
    regularized_incomplete_beta,
    trigamma,
)

__version__ = "0.1.0"

__all__ = [
    "BiasSummary", "PairedTestResult", "bias", "kl_matrix", "paired_t_test",
    "backend_name",
    "ConvergenceError", "DegenerateSampleError", "DomainError",
    "IllPosedPosteriorError", "InsufficientDataError", "NumericalAnomalyError",
    "ConvergenceConfig", "FitResult", "Method", "PosteriorHyperparams",
    "RatePrior", "ShapePriorBL1", "ShapePriorBL2", "bl1_log_prior", "fit",
    "fit_bl1", "fit_bl2", "fit_ml1", "fit_ml2", "fit_mm", "rate_posterior",
    "CurveTable", "ExperimentConfig", "ExperimentRecord", "ExperimentResult",
    "default_curve_grid", "derive_seed", "emit_prior_posterior_curves",
    "run_bias_experiment", "run_timing_experiment",
    "GammaParams", "RNG_ALGORITHM", "Sample", "kl_divergence",
    "log_likelihood", "log_pdf", "moments", "profile_log_likelihood", "sample",
    "SpecFunConfig", "digamma", "inverse_digamma", "log_gamma",
    "regularized_incomplete_beta", "trigamma",
    "__version__",
]
