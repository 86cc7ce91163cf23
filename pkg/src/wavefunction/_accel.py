"""Backend selection for the numeric kernels.

``WAVEFUNCTION_BACKEND=numpy`` forces the pure-numpy/python kernels; the
default ``numba`` falls back to numpy silently when numba is not importable.
The flag is read once, at import time.
"""

import os

BACKEND_ENV = "WAVEFUNCTION_BACKEND"
_CHOICES = ("numba", "numpy")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _resolve_backend():
    requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if requested not in _CHOICES:
        raise ValueError(
            f"{BACKEND_ENV} must be one of {_CHOICES}, got {requested!r}"
        )
    if requested == "numba" and not HAS_NUMBA:
        return "numpy"
    return requested


BACKEND = _resolve_backend()


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged.

    No fastmath: the compiled and interpreted paths must agree to roundoff.
    """
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
