import pytest

from gammafit.model import GammaParams, sample
from gammafit.specfun import (
    digamma,
    inverse_digamma,
    log_gamma,
    regularized_incomplete_beta,
    trigamma,
)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Touch every jitted kernel once so timed tests measure steady-state
    # cost, not JIT compilation.
    log_gamma(1.5)
    digamma(1.5)
    trigamma(1.5)
    inverse_digamma(0.25)
    regularized_incomplete_beta(2.0, 3.0, 0.4)
    sample(GammaParams(2.0, 3.0), 4, seed=1)
