"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class InsufficientDataError(ValueError):
    """Too few observations for the requested estimator."""


class DegenerateSampleError(ValueError):
    """The observations carry no spread, so moment initialization is impossible."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget.

    The last iterate is kept on the ``last_iterate`` attribute so callers
    can inspect (or accept) the unconverged value.
    """

    def __init__(self, message: str, last_iterate: float):
        super().__init__(message)
        self.last_iterate = last_iterate


class IllPosedPosteriorError(RuntimeError):
    """The approximated shape posterior has no positive mode."""


class NumericalAnomalyError(RuntimeError):
    """An internal sanity check failed; indicates a kernel bug, not bad data."""
