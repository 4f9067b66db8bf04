"""Execution-backend selection for the hot numerical kernels.

The kernels exist in two interchangeable flavours: plain Python/numpy
(``_kernels``) and numba ``@njit`` twins (``_numba_kernels``).  The active
flavour is chosen once, at import time, from the ``GAMMAFIT_BACKEND``
environment variable:

``auto``
    use numba when importable, otherwise fall back silently (default)
``numba``
    require numba; raise ImportError when it is unavailable
``numpy``
    force the pure-Python/numpy path

Both flavours produce bit-identical results (asserted by the test suite);
the choice only affects speed.  ``benchmarks/bench_backends.py`` compares
the two.
"""

from __future__ import annotations

import os

ENV_VAR = "GAMMAFIT_BACKEND"

_choice = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"{ENV_VAR} must be one of 'auto', 'numba' or 'numpy', got {_choice!r}")

if _choice == "numpy":
    from . import _kernels as kernels
    _name = "numpy"
else:
    try:
        from . import _numba_kernels as kernels
        _name = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _kernels as kernels
        _name = "numpy"


def backend_name() -> str:
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return _name
