"""Hot inner loops, compiled with numba when available.

The backend is chosen once at import time from ``WARMQ_ACCEL``:
``numba`` (default when numba imports) or ``numpy``. Both backends expose
the same functions and agree to rounding error; ``BACKEND`` names the one
in use.
"""
import os
import warnings

from . import _numpy

_requested = os.environ.get("WARMQ_ACCEL", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"WARMQ_ACCEL must be 'numba' or 'numpy', got {_requested!r}")

_impl = _numpy
if _requested == "numba":
    try:
        from . import _numba as _impl
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba not importable; falling back to numpy kernels")
        _impl = _numpy

BACKEND = "numba" if _impl is not _numpy else "numpy"

apply_qubit_superop = _impl.apply_qubit_superop
min_eigvalsh_batch = _impl.min_eigvalsh_batch
product_expectations = _impl.product_expectations


def backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"numpy": _numpy}
    try:
        from . import _numba
    except ImportError:  # pragma: no cover
        return out
    out["numba"] = _numba
    return out

__all__ = [
    "BACKEND",
    "apply_qubit_superop",
    "backends",
    "min_eigvalsh_batch",
    "product_expectations",
]
