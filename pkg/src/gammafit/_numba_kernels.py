"""numba-compiled twins of the kernels in ``_kernels``.

Importing this module compiles every kernel eagerly (explicit signatures)
with on-disk caching, so the JIT cost is paid once per environment.
"""

from __future__ import annotations

import numba as nb
from numba import types

from . import _kernels as _k

_f8 = types.float64
_u8 = types.uint64
_i8 = types.int64


def _jit(signature, func):
    return nb.njit(signature, cache=True)(func)


log_gamma = _jit(_f8(_f8), _k.log_gamma)
digamma = _jit(_f8(_f8), _k.digamma)
trigamma = _jit(_f8(_f8), _k.trigamma)
inverse_digamma = _jit(types.Tuple((_f8, types.boolean))(_f8, _f8, _i8),
                       _k.inverse_digamma)
betainc = _jit(_f8(_f8, _f8, _f8), _k.betainc)
splitmix64_next = _jit(types.UniTuple(_u8, 2)(_u8), _k.splitmix64_next)
unit_uniform = _jit(_f8(_u8), _k.unit_uniform)
standard_normal_step = _jit(types.Tuple((_u8, _f8))(_u8), _k.standard_normal_step)
gamma_fill = _jit(types.Tuple((_f8[:], _u8))(_i8, _f8, _u8), _k.gamma_fill)
