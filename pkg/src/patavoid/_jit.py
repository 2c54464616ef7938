"""Optional numba acceleration.

Kernels are written once as plain numpy code. They are compiled with
``numba.njit`` unless the environment variable ``PATAVOID_PURE`` is set to a
truthy value (or numba is missing), in which case the same functions run
interpreted.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("PATAVOID_PURE", "").strip().lower()
PURE = _FLAG not in ("", "0", "false", "no")

try:  # pragma: no cover - depends on the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None
    PURE = True

USING_NUMBA = not PURE


def kernel(func):
    """Compile ``func`` with numba when acceleration is enabled.

    The interpreted original stays reachable as ``.py_func`` either way, so
    tests and benchmarks can exercise both paths in one process.
    """
    if PURE:
        func.py_func = func
        return func
    return _numba.njit(cache=True, nogil=True)(func)
