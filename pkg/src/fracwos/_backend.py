"""Execution backend selection.

Hot scalar kernels carry an ``@jit`` decorator that compiles with numba when
available.  Setting ``FRACWOS_BACKEND=numpy`` (or running without numba
installed) turns the decorator into a no-op so the same source executes as
plain Python; the walk engine then routes through the pure-Python walker.
Results agree between backends to ~1e-12 relative (libm ulp differences);
within a backend they are bit-identical for any parallelism level.
"""

import os

_ENV_VAR = "FRACWOS_BACKEND"


def _detect() -> str:
    requested = os.environ.get(_ENV_VAR, "numba").strip().lower()
    if requested in ("numpy", "python", "off", "0"):
        return "numpy"
    if requested not in ("numba", "jit", "on", "1", ""):
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {requested!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


_BACKEND = _detect()


def backend_name() -> str:
    """Active backend, ``"numba"`` or ``"numpy"``."""
    return _BACKEND


def using_numba() -> bool:
    return _BACKEND == "numba"


if _BACKEND == "numba":
    from numba import njit as _njit

    def jit(**options):
        options.setdefault("cache", True)
        options.setdefault("nogil", True)
        return _njit(**options)

else:

    def jit(**options):  # noqa: ARG001 - mirror the numba signature
        def wrap(fn):
            return fn

        return wrap
