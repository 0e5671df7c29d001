"""Kernel backend selection.

Hot loops exist twice: as numba ``@njit`` kernels and as vectorised numpy
(and scipy) code. ``RSSCRB_BACKEND=numpy`` forces the fallback; the default
is numba whenever it imports cleanly.
"""

import contextlib
import os
import warnings

_ENV = "RSSCRB_BACKEND"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba ships with the dev environment
    HAVE_NUMBA = False


def _initial_backend():
    requested = os.environ.get(_ENV, "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ValueError(f"{_ENV} must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        warnings.warn("numba requested but not importable; using numpy kernels")
        return "numpy"
    return requested


_current = _initial_backend()


def backend_name():
    return _current


def kernels(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    name = name or _current
    if name == "numba":
        from . import _kernels_numba as mod
    elif name == "numpy":
        from . import _kernels_numpy as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    return mod


def set_backend(name):
    global _current
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    kernels(name)
    _current = name


@contextlib.contextmanager
def use_backend(name):
    previous = _current
    set_backend(name)
    try:
        yield kernels(name)
    finally:
        set_backend(previous)
