"""Kernel backend selection.

Hot kernels ship in two flavours: a loop-style source compiled with
numba.njit, and a vectorized pure-numpy fallback.  Setting
ERGOLAB_NO_NUMBA=1 (or numba being unavailable) selects the fallback.
Both flavours use the same fixed pairwise reduction tree, so results do
not depend on the backend beyond last-bit roundoff.
"""

import os

_disable = os.environ.get("ERGOLAB_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

if not _disable:
    try:
        from numba import njit  # noqa: F401

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


def jit(func):
    """Compile with numba when enabled, otherwise return func unchanged."""
    if USE_NUMBA:
        from numba import njit

        return njit(cache=True)(func)
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
