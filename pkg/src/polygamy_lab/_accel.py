"""Backend selection for the hot numeric kernels.

Two interchangeable execution paths exist for everything in
:mod:`polygamy_lab.kernels`:

* ``numba``: kernels are compiled with ``numba.njit(cache=True, nogil=True)``.
* ``numpy``: the same functions run as plain Python/NumPy (slower, no numba
  import at all).

The path is chosen once at import time from the ``POLYGAMY_LAB_BACKEND``
environment variable (``numba``, ``numpy``, or ``auto``; default ``auto``
which prefers numba when it is importable).  Results of the two paths agree
to floating-point roundoff; reproducibility guarantees (byte-identical CSV
and so on) hold per backend.
"""

from __future__ import annotations

import os

_ENV_VAR = "POLYGAMY_LAB_BACKEND"


def _resolve_backend(requested: str) -> str:
    requested = requested.strip().lower()
    if requested in ("", "auto"):
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
        return "numba"
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        import numba  # noqa: F401  (raise immediately if unusable)

        return "numba"
    raise RuntimeError(
        f"{_ENV_VAR}={requested!r} is not recognized; use 'numba', 'numpy' or 'auto'"
    )


BACKEND: str = _resolve_backend(os.environ.get(_ENV_VAR, "auto"))
NUMBA_ENABLED: bool = BACKEND == "numba"

if NUMBA_ENABLED:
    from numba import njit as _njit

    def jit(func):
        """Compile ``func`` for the active backend (numba path)."""
        return _njit(cache=True, nogil=True)(func)

else:

    def jit(func):
        """Identity decorator: the numpy path runs kernels uncompiled."""
        return func
