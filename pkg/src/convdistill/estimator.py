"""scikit-learn style estimator facade over the functional API."""

import numpy as np
from sklearn.base import BaseEstimator

from .distill import AUTO_LAMBDA, fit_error, forward, solve_kernel_batch
from .explain import block_grid, columns, contribution_map, rows
from .runtime import WorkerPool
from .validation import as_complex_matrix

__all__ = ["ConvolutionDistiller"]

_SEGMENTATIONS = {"columns": columns, "rows": rows}


def _as_batch(X):
    arr = np.asarray(X, dtype=np.complex128)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3:
        raise ValueError(f"expected one matrix or a batch of matrices, got ndim={arr.ndim}")
    return [as_complex_matrix(m) for m in arr]


class ConvolutionDistiller(BaseEstimator):
    """Distill recorded input/output pairs into a circular-convolution kernel.

    Parameters
    ----------
    reg_lambda : float or "auto"
        Tikhonov strength for the spectral division. 0 requires every
        input-spectrum bin to be bounded away from zero; "auto" picks a
        scale-invariant floor from the mean input power.
    cores : int
        Logical workers used for the internal transforms.
    """

    def __init__(self, reg_lambda=AUTO_LAMBDA, cores=1):
        self.reg_lambda = reg_lambda
        self.cores = cores

    def _pool(self):
        return WorkerPool(self.cores)

    def fit(self, X, y):
        """Fit the kernel from matrices X (n, M, N) and outputs y (n, M, N)."""
        xs = _as_batch(X)
        ys = _as_batch(y)
        if len(xs) != len(ys):
            raise ValueError(f"got {len(xs)} inputs but {len(ys)} outputs")
        pairs = list(zip(xs, ys))
        model = solve_kernel_batch(pairs, self.reg_lambda, self._pool())
        self.model_ = model
        self.kernel_ = model.kernel
        self.lambda_ = model.lam
        self.fit_error_ = fit_error(model, pairs, self._pool())
        return self

    def predict(self, X):
        """Surrogate outputs X (*) K, one matrix per input."""
        self._check_fitted()
        xs = _as_batch(X)
        pool = self._pool()
        return np.stack([forward(self.model_, x, pool) for x in xs])

    def score(self, X, y):
        """1 - relative Frobenius residual over the given pairs."""
        self._check_fitted()
        pairs = list(zip(_as_batch(X), _as_batch(y)))
        return 1.0 - fit_error(self.model_, pairs, self._pool())

    def explain(self, x, y=None, segmentation="columns", block_shape=(2, 2)):
        """Contribution map of one input under the fitted surrogate.

        When y is omitted the surrogate's own prediction is used as the
        reference output. segmentation is "columns", "rows" or "block"
        (with block_shape giving the sub-block size).
        """
        self._check_fitted()
        x = as_complex_matrix(x, "x")
        pool = self._pool()
        if y is None:
            y = forward(self.model_, x, pool)
        if segmentation == "block":
            seg = block_grid(x.shape, *block_shape)
        elif segmentation in _SEGMENTATIONS:
            seg = _SEGMENTATIONS[segmentation](x.shape)
        else:
            raise ValueError(f"unknown segmentation {segmentation!r}")
        return contribution_map(x, y, self.model_, seg, pool)

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise RuntimeError("this ConvolutionDistiller instance is not fitted yet")
