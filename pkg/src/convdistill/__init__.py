"""convdistill: explainable-ML distillation via circular-convolution surrogates.

Fits a one-layer circular-convolution kernel to recorded input/output
pairs with a frequency-domain closed form, scores per-feature
contributions by zero-occlusion, and runs every 2-D transform through a
row-column decomposition sharded over a worker pool.
"""

__version__ = "0.1.0"

from .distill import AUTO_LAMBDA, DistilledModel, fit_error, forward, solve_kernel, solve_kernel_batch
from .errors import (
    ConvDistillError,
    DimensionMismatch,
    DivisionNearZero,
    EmptyInput,
    MatrixFormatError,
    SegmentationMismatch,
    UnknownFeature,
    UnsupportedSegmentation,
)
from .estimator import ConvolutionDistiller
from .explain import (
    ContributionMap,
    FeatureSegmentation,
    block_grid,
    columns,
    contribution,
    contribution_map,
    custom,
    heatmap,
    mask_feature,
    rank_features,
    rows,
)
from .fourier import (
    Normalization,
    circular_convolve_direct,
    circular_convolve_fft,
    dft_2d_direct,
    dft_2d_two_stage,
    fourier_matrix,
    idft_2d,
)
from .numeric import BlockPartition, block_matmul, hadamard, hadamard_div_regularized, matmul_naive
from .runtime import (
    Axis,
    DistributionTable,
    Shard,
    WorkerPool,
    parallel_batch_dft,
    parallel_dft_2d,
    plan_split,
    reduce_sum,
)

__all__ = [
    "AUTO_LAMBDA",
    "Axis",
    "BlockPartition",
    "ContributionMap",
    "ConvDistillError",
    "ConvolutionDistiller",
    "DimensionMismatch",
    "DistilledModel",
    "DistributionTable",
    "DivisionNearZero",
    "EmptyInput",
    "FeatureSegmentation",
    "MatrixFormatError",
    "Normalization",
    "SegmentationMismatch",
    "Shard",
    "UnknownFeature",
    "UnsupportedSegmentation",
    "WorkerPool",
    "block_grid",
    "block_matmul",
    "circular_convolve_direct",
    "circular_convolve_fft",
    "columns",
    "contribution",
    "contribution_map",
    "custom",
    "dft_2d_direct",
    "dft_2d_two_stage",
    "fit_error",
    "forward",
    "fourier_matrix",
    "hadamard",
    "hadamard_div_regularized",
    "heatmap",
    "idft_2d",
    "mask_feature",
    "matmul_naive",
    "parallel_batch_dft",
    "parallel_dft_2d",
    "plan_split",
    "rank_features",
    "reduce_sum",
    "rows",
    "solve_kernel",
    "solve_kernel_batch",
]
