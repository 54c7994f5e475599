"""Discrete Fourier transforms in two-stage matrix-product form.

The fast path computes a 2-D DFT as ``W_M @ x @ W_N`` where ``W`` is the
dense Fourier matrix; arbitrary (non power-of-two) sizes stay exact.
`dft_1d_direct` / `dft_2d_direct` are definitional-sum oracles and are
never used by the fast path.

Normalization: the UNITARY mode applies 1/sqrt(M) per 1-D stage (so
1/sqrt(MN) overall); UNNORMALIZED applies no factor. The convolution
theorem (and hence every solver path) holds exactly only for the
unnormalized transform, which is why convolution routines here hardwire
UNNORMALIZED internally.
"""

import enum

import numpy as np

from .numeric import hadamard
from .validation import as_complex_matrix, check_same_shape

__all__ = [
    "Normalization",
    "fourier_matrix",
    "inverse_fourier_matrix",
    "dft_1d_direct",
    "dft_2d_direct",
    "dft_rows",
    "dft_cols",
    "dft_2d_two_stage",
    "idft_2d",
    "circular_convolve_direct",
    "circular_convolve_fft",
]


class Normalization(enum.Enum):
    UNNORMALIZED = "unnorm"
    UNITARY = "unitary"


def _scale(m, norm):
    return 1.0 / np.sqrt(m) if norm is Normalization.UNITARY else 1.0


def fourier_matrix(m, norm=Normalization.UNNORMALIZED):
    """M x M forward Fourier matrix: entry [r, k] = scale * e^{-2i pi r k / M}."""
    if m < 1:
        raise ValueError(f"order must be >= 1, got {m}")
    idx = np.arange(m)
    w = np.exp(-2j * np.pi * np.outer(idx, idx) / m)
    return _scale(m, norm) * w


def inverse_fourier_matrix(m, norm=Normalization.UNNORMALIZED):
    """Exact inverse of :func:`fourier_matrix` under the same normalization."""
    if m < 1:
        raise ValueError(f"order must be >= 1, got {m}")
    idx = np.arange(m)
    w = np.exp(2j * np.pi * np.outer(idx, idx) / m)
    scale = 1.0 / np.sqrt(m) if norm is Normalization.UNITARY else 1.0 / m
    return scale * w


def dft_1d_direct(x, norm=Normalization.UNNORMALIZED):
    """Definitional O(M^2) 1-D DFT sum. Oracle only."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    m = x.size
    if m < 1:
        raise ValueError("vector must be nonempty")
    out = np.zeros(m, dtype=np.complex128)
    for k in range(m):
        acc = 0j
        for r in range(m):
            acc += x[r] * np.exp(-2j * np.pi * r * k / m)
        out[k] = acc
    return _scale(m, norm) * out


def dft_2d_direct(x, norm=Normalization.UNNORMALIZED):
    """Definitional O(M^2 N^2) 2-D DFT double sum. Oracle for all fast paths.

    Evaluated bin by bin without factorizing the double sum, so it stays
    independent of the two-stage path it certifies.
    """
    x = as_complex_matrix(x, "x")
    m, n = x.shape
    em = np.exp(-2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m)
    en = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    out = np.empty((m, n), dtype=np.complex128)
    for k in range(m):
        xk = x * em[:, k][:, None]
        for l in range(n):
            out[k, l] = np.sum(xk * en[:, l][None, :])
    return _scale(m, norm) * _scale(n, norm) * out


def dft_rows(x, norm=Normalization.UNNORMALIZED):
    """First stage: transform every column of x (left-multiply by W_M)."""
    x = as_complex_matrix(x, "x")
    return fourier_matrix(x.shape[0], norm) @ x


def dft_cols(x, norm=Normalization.UNNORMALIZED):
    """Second stage: transform every row of x (right-multiply by W_N)."""
    x = as_complex_matrix(x, "x")
    return x @ fourier_matrix(x.shape[1], norm)


def dft_2d_two_stage(x, norm=Normalization.UNNORMALIZED):
    """2-D DFT as (W_M @ x) @ W_N."""
    return dft_cols(dft_rows(x, norm), norm)


def idft_2d(x, norm=Normalization.UNNORMALIZED):
    """Inverse of :func:`dft_2d_two_stage` under the same normalization."""
    x = as_complex_matrix(x, "x")
    m, n = x.shape
    return (inverse_fourier_matrix(m, norm) @ x) @ inverse_fourier_matrix(n, norm)


def circular_convolve_direct(x, k):
    """Periodic 2-D convolution by the definitional double sum. Oracle only."""
    x = as_complex_matrix(x, "x")
    k = as_complex_matrix(k, "k")
    check_same_shape(x, k, "circular_convolve_direct")
    m, n = x.shape
    rows = np.arange(m)[:, None]
    cols = np.arange(n)[None, :]
    out = np.empty((m, n), dtype=np.complex128)
    for a in range(m):
        for b in range(n):
            out[a, b] = np.sum(x * k[(a - rows) % m, (b - cols) % n])
    return out


def circular_convolve_fft(x, k):
    """Periodic 2-D convolution via the convolution theorem.

    Uses unnormalized transforms, under which F(x (*) k) == F(x) o F(k)
    holds exactly.
    """
    x = as_complex_matrix(x, "x")
    k = as_complex_matrix(k, "k")
    check_same_shape(x, k, "circular_convolve_fft")
    un = Normalization.UNNORMALIZED
    return idft_2d(hadamard(dft_2d_two_stage(x, un), dft_2d_two_stage(k, un)), un)
