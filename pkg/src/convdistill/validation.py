"""Input validation helpers.

All public entry points funnel their matrix arguments through
:func:`as_complex_matrix` so the numerical code can assume dense,
finite, 2-D complex128 arrays throughout.
"""

import numpy as np

from .errors import DimensionMismatch

__all__ = ["as_complex_matrix", "check_same_shape", "check_matmul_compat"]


def as_complex_matrix(a, name="matrix"):
    """Coerce ``a`` to a 2-D complex128 ndarray, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(arr)


def check_same_shape(a, b, op="operation"):
    if a.shape != b.shape:
        raise DimensionMismatch(f"{op}: shapes {a.shape} and {b.shape} differ")


def check_matmul_compat(a, b):
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"matmul: inner dimensions differ ({a.shape} x {b.shape})"
        )
