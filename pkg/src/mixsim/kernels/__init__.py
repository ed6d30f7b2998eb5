"""Kernel backend selection.

The hot inner loops (ray casting, grid search, belief integration, path
projection) run through numba's ``@njit`` by default. Setting the
environment variable ``MIXSIM_KERNELS=numpy`` before import selects the
pure-Python/numpy fallback, which executes the identical source.

``benchmarks/bench_kernels.py`` times the two backends against each other.
"""

import os
import warnings

from . import impl


def _pick_backend() -> str:
    choice = os.environ.get("MIXSIM_KERNELS", "numba").strip().lower()
    if choice in ("numpy", "pure", "python"):
        return "numpy"
    if choice != "numba":
        warnings.warn(f"unknown MIXSIM_KERNELS={choice!r}; using numba", stacklevel=2)
    try:
        import numba  # noqa: F401
    except ImportError:
        warnings.warn("numba not importable; falling back to numpy kernels", stacklevel=2)
        return "numpy"
    return "numba"


BACKEND = _pick_backend()

if BACKEND == "numba":
    from numba import njit

    _kernels = impl.build(lambda f: njit(fastmath=False)(f))
else:
    _kernels = impl.build(None)

raycast = _kernels.raycast
scan_ranges = _kernels.scan_ranges
astar = _kernels.astar
polyline_progress = _kernels.polyline_progress
integrate_scan = _kernels.integrate_scan

__all__ = [
    "BACKEND",
    "raycast",
    "scan_ranges",
    "astar",
    "polyline_progress",
    "integrate_scan",
]
