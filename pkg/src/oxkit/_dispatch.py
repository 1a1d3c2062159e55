"""Numba/numpy execution-path selection for the hot kernels.

Every hot kernel ships two implementations that compute the exact same
floating-point expression tree: a loop version compiled with numba and a
vectorized numpy version. ``OXKIT_NO_NUMBA=1`` (or a missing numba install)
selects the numpy path. Benchmarks and path-equivalence tests can request a
path explicitly.
"""

from __future__ import annotations

import os

_TRUTHY = {"1", "true", "yes", "on"}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _select_path() -> str:
    if os.environ.get("OXKIT_NO_NUMBA", "").strip().lower() in _TRUTHY:
        return "numpy"
    return "numba" if _numba_available() else "numpy"


ACTIVE_PATH: str = _select_path()

if ACTIVE_PATH == "numba":
    from numba import njit
else:

    def njit(*args, **kwargs):
        """Identity decorator used when the numba path is disabled."""

        def wrap(fn):
            return fn

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return wrap


def resolve_path(path: str | None) -> str:
    """Validate an explicit path request, defaulting to the active one."""
    if path is None:
        return ACTIVE_PATH
    if path not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel path {path!r}")
    if path == "numba" and ACTIVE_PATH != "numba":
        raise RuntimeError("numba path requested but numba is disabled or missing")
    return path
