"""Kernel backend selection.

The hot loops in this package (word reduction, tracing, piling) are written
once in nopython-compatible Python and compiled with numba when available.
Set ``AAGLAB_BACKEND=python`` to run the same source uncompiled (slow, no
numba import at all) or ``AAGLAB_BACKEND=numba`` to require compilation.
"""

import os

_CHOICES = ("auto", "numba", "python")


def _pick() -> str:
    raw = os.environ.get("AAGLAB_BACKEND", "auto").strip().lower() or "auto"
    if raw not in _CHOICES:
        raise ValueError(
            f"AAGLAB_BACKEND must be one of {_CHOICES}, got {raw!r}"
        )
    if raw == "python":
        return "python"
    try:
        import numba  # noqa: F401
    except ImportError:
        if raw == "numba":
            raise
        return "python"
    return "numba"


BACKEND = _pick()
NUMBA_ENABLED = BACKEND == "numba"


def jit(func):
    """Compile ``func`` with numba when the numba backend is active."""
    if NUMBA_ENABLED:
        from numba import njit

        return njit(cache=True)(func)
    return func
