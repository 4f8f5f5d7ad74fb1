"""JIT selection for the numeric kernels.

Kernels are written so the same source runs under ``numba.njit`` or as plain
numpy. Set ``PENCIL_PERSIST_DISABLE_NUMBA=1`` (before import) to force the
numpy path; it is also used automatically when numba is not importable.
"""

import os

_FLAG = "PENCIL_PERSIST_DISABLE_NUMBA"


def _wants_numba():
    return os.environ.get(_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}


try:
    if not _wants_numba():
        raise ImportError
    import numba as _numba
except ImportError:
    _numba = None

USING_NUMBA = _numba is not None
BACKEND = "numba" if USING_NUMBA else "numpy"


def maybe_njit(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)

if USING_NUMBA:
    import warnings

    warnings.filterwarnings("ignore", category=_numba.core.errors.NumbaPerformanceWarning)
