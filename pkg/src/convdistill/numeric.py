"""Dense complex matrix kernels.

Matrices are plain 2-D complex128 ndarrays (see :mod:`convdistill.validation`).
`matmul_naive` is the deliberately dumb triple-loop oracle; `block_matmul`
is the partitioned implementation it certifies.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DivisionNearZero
from .validation import as_complex_matrix, check_matmul_compat, check_same_shape

__all__ = [
    "BlockPartition",
    "matmul_naive",
    "block_matmul",
    "hadamard",
    "hadamard_div_regularized",
    "NEAR_ZERO_RTOL",
]

# Relative noise floor below which an unregularized denominator bin is
# treated as singular.
NEAR_ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class BlockPartition:
    """Block sizes for partitioned matmul; edge blocks may be smaller."""

    block_rows: int = 64
    block_cols: int = 64

    def __post_init__(self):
        if self.block_rows < 1 or self.block_cols < 1:
            raise ValueError(f"block dimensions must be >= 1, got {self}")


def matmul_naive(a, b):
    """Triple-loop matrix product. Oracle only; O(n^3) Python loops."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    check_matmul_compat(a, b)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.complex128)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0j
            for k in range(a.shape[1]):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def block_matmul(a, b, part=BlockPartition(), pool=None):
    """Partitioned matrix product.

    The output is tiled by `part`; each output tile is the sum of its
    block products, accumulated in ascending inner-block order so the
    result is deterministic for a given partition. Tiles are independent
    and may run on distinct workers of `pool` (any object with a
    ``map_ordered(fn, items)`` method; None means serial).
    """
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    check_matmul_compat(a, b)
    m, inner = a.shape
    n = b.shape[1]
    br, bc = part.block_rows, part.block_cols

    row_starts = range(0, m, br)
    col_starts = range(0, n, bc)
    inner_starts = list(range(0, inner, bc))

    def tile(ij):
        i0, j0 = ij
        acc = np.zeros((min(br, m - i0), min(bc, n - j0)), dtype=np.complex128)
        for k0 in inner_starts:
            k1 = min(k0 + bc, inner)
            acc += a[i0 : i0 + br, k0:k1] @ b[k0:k1, j0 : j0 + bc]
        return acc

    tiles = [(i0, j0) for i0 in row_starts for j0 in col_starts]
    if pool is None:
        results = [tile(t) for t in tiles]
    else:
        results = pool.map_ordered(tile, tiles)

    out = np.empty((m, n), dtype=np.complex128)
    for (i0, j0), block in zip(tiles, results):
        out[i0 : i0 + br, j0 : j0 + bc] = block
    return out


def hadamard(a, b):
    """Elementwise product of two same-shape matrices."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    check_same_shape(a, b, "hadamard")
    return a * b


def hadamard_div_regularized(num, den, lam):
    """Elementwise Tikhonov-regularized division.

    Computes ``num * conj(den) / (|den|^2 + lam)``. With ``lam == 0``
    this is plain elementwise division; in that case any denominator
    entry with magnitude below ``NEAR_ZERO_RTOL * max|den|`` raises
    :class:`DivisionNearZero` rather than producing a huge or
    non-finite value.
    """
    num = as_complex_matrix(num, "num")
    den = as_complex_matrix(den, "den")
    check_same_shape(num, den, "hadamard_div_regularized")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    mag2 = den.real**2 + den.imag**2
    if lam == 0:
        mag = np.sqrt(mag2)
        peak = mag.max()
        if peak == 0.0 or mag.min() < NEAR_ZERO_RTOL * peak:
            raise DivisionNearZero(
                "denominator has a near-zero entry; pass lam > 0 to regularize"
            )
    return num * np.conj(den) / (mag2 + lam)
