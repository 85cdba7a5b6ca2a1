"""Numba toggle shared by the hot kernels.

Every performance-critical inner loop in this package exists twice: a
numba ``@njit`` version and a pure-NumPy version. The default path is
chosen once at import time:

* numba importable and ``REGIONAUDIT_NO_NUMBA`` unset -> jitted kernels
* otherwise -> NumPy fallbacks

``HAS_NUMBA`` records availability alone, so benchmarks can time both
paths in one process regardless of the flag. Set
``REGIONAUDIT_NO_NUMBA=1`` to force the fallback as the default
(useful for debugging and timing comparisons).
"""

from __future__ import annotations

import os

_ENV_FLAG = "REGIONAUDIT_NO_NUMBA"


def _flag_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised on numba-free installs
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        """No-op decorator so jitted sources stay importable without numba."""
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


NUMBA_ENABLED = HAS_NUMBA and not _flag_disabled()
