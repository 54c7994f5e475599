"""Fit a one-layer circular-convolution surrogate in the frequency domain.

Given recorded pairs (X_i, Y_i) of an opaque model, the kernel K with
X (*) K ~= Y is recovered in closed form: per frequency bin,
K^(w) = sum_i F(Y_i)(w) conj(F(X_i)(w)) / (sum_i |F(X_i)(w)|^2 + lam),
then K = iDFT(K^). This is the exact minimizer of
sum_i ||X_i (*) K - Y_i||^2 + lam ||K||^2, so fitting costs one forward
pass worth of transforms, with no iterative optimizer.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DivisionNearZero, EmptyInput
from .fourier import Normalization
from .numeric import NEAR_ZERO_RTOL, hadamard
from .runtime import WorkerPool, parallel_batch_dft, parallel_dft_2d, reduce_sum
from .validation import as_complex_matrix, check_same_shape

__all__ = ["DistilledModel", "AUTO_LAMBDA", "solve_kernel", "solve_kernel_batch", "forward", "fit_error"]

# Sentinel accepted wherever a regularization strength is expected.
AUTO_LAMBDA = "auto"

# Auto mode sets lam to this fraction of the mean input spectral power.
AUTO_LAMBDA_FRACTION = 1e-6


@dataclass(frozen=True)
class DistilledModel:
    """Fitted surrogate: circular-convolution kernel plus fit metadata."""

    kernel: np.ndarray
    lam: float = 0.0
    norm: Normalization = field(default=Normalization.UNNORMALIZED)

    def __post_init__(self):
        object.__setattr__(self, "kernel", as_complex_matrix(self.kernel, "kernel"))
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")

    @property
    def shape(self):
        return self.kernel.shape

    def real_kernel(self, rtol=1e-8):
        """Real projection of the kernel.

        Raises ValueError when the imaginary part is not negligible,
        which signals inconsistent (genuinely complex) training data
        rather than silently truncating it.
        """
        peak_re = np.abs(self.kernel.real).max()
        peak_im = np.abs(self.kernel.imag).max()
        if peak_im > rtol * max(peak_re, np.finfo(float).tiny):
            raise ValueError(
                f"kernel has significant imaginary part (max |imag| = {peak_im:g}); "
                "training data are not consistent with a real kernel"
            )
        return self.kernel.real.copy()


def _validate_pairs(pairs):
    mats = []
    for i, (x, y) in enumerate(pairs):
        x = as_complex_matrix(x, f"x[{i}]")
        y = as_complex_matrix(y, f"y[{i}]")
        check_same_shape(x, y, f"pair {i}")
        mats.append((x, y))
    if not mats:
        raise EmptyInput("training set must contain at least one pair")
    shape = mats[0][0].shape
    for i, (x, _) in enumerate(mats[1:], start=1):
        if x.shape != shape:
            raise DimensionMismatch(
                f"pair {i} has shape {x.shape}, expected {shape}"
            )
    return mats


def _resolve_lambda(lam, power):
    if lam == AUTO_LAMBDA:
        return AUTO_LAMBDA_FRACTION * float(np.mean(power))
    lam = float(lam)
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return lam


def _solve_spectra(numerator, power, lam):
    """Shared spectral division: numerator / (power + lam) with zero guard."""
    if lam == 0:
        mag = np.sqrt(power)
        peak = mag.max()
        if peak == 0.0 or mag.min() < NEAR_ZERO_RTOL * peak:
            raise DivisionNearZero(
                "input spectrum has a near-zero bin; pass lam > 0 (or 'auto')"
            )
    return numerator / (power + lam)


def solve_kernel(x, y, lam=0.0, pool=WorkerPool(1)):
    """Closed-form single-pair kernel: K = iDFT(F(Y) conj(F(X)) / (|F(X)|^2 + lam))."""
    return solve_kernel_batch([(x, y)], lam, pool)


def solve_kernel_batch(pairs, lam=0.0, pool=WorkerPool(1)):
    """Closed-form kernel for one or more (X, Y) pairs.

    Reduces exactly (bit-for-bit) to the single-pair solution when the
    set has one pair: numerator and denominator are then a single term.
    """
    mats = _validate_pairs(pairs)
    un = Normalization.UNNORMALIZED
    fx = parallel_batch_dft([x for x, _ in mats], un, pool)
    fy = parallel_batch_dft([y for _, y in mats], un, pool)
    numerator = reduce_sum([fyi * np.conj(fxi) for fxi, fyi in zip(fx, fy)])
    power = reduce_sum([(fxi.real**2 + fxi.imag**2).astype(np.complex128) for fxi in fx]).real
    lam = _resolve_lambda(lam, power)
    spectrum = _solve_spectra(numerator, power, lam)
    kernel = parallel_dft_2d(spectrum, un, pool, inverse=True)
    return DistilledModel(kernel=kernel, lam=lam)


def forward(model, x, pool=WorkerPool(1)):
    """Surrogate prediction Y = X (*) K via frequency-domain convolution."""
    x = as_complex_matrix(x, "x")
    if x.shape != model.kernel.shape:
        raise DimensionMismatch(
            f"input shape {x.shape} does not match kernel shape {model.kernel.shape}"
        )
    un = Normalization.UNNORMALIZED
    fx, fk = parallel_batch_dft([x, model.kernel], un, pool)
    return parallel_dft_2d(hadamard(fx, fk), un, pool, inverse=True)


def fit_error(model, pairs, pool=WorkerPool(1)):
    """Relative residual sqrt(sum ||X_i (*) K - Y_i||^2 / sum ||Y_i||^2)."""
    mats = _validate_pairs(pairs)
    num = 0.0
    den = 0.0
    for x, y in mats:
        if x.shape != model.kernel.shape:
            raise DimensionMismatch(
                f"pair shape {x.shape} does not match kernel shape {model.kernel.shape}"
            )
        resid = forward(model, x, pool) - y
        num += float(np.sum(np.abs(resid) ** 2))
        den += float(np.sum(np.abs(y) ** 2))
    if den == 0.0:
        raise DivisionNearZero("all reference outputs are zero; relative error undefined")
    return float(np.sqrt(num / den))
