"""Kernel backend selection.

Hot numeric loops are JIT-compiled with numba when it is installed and not
explicitly disabled.  Setting the environment variable MAGIC_SWITCH_NO_NUMBA
to "1" (or "true"/"yes") forces the pure-numpy fallback; the same source
function runs on both paths so results are bit-identical.
"""

from __future__ import annotations

import os

_ENV_FLAG = "MAGIC_SWITCH_NO_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not numba_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"


def maybe_njit(fn):
    """Return a jitted version of ``fn`` on the numba path, else ``fn`` itself."""
    if USE_NUMBA:
        return _njit(cache=True)(fn)
    return fn


def force_njit(fn):
    """Jit ``fn`` unconditionally (benchmark use); raises if numba is absent."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return _njit(cache=True)(fn)
