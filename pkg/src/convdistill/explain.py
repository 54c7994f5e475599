"""Occlusion-based contribution analysis for a fitted surrogate.

A segmentation partitions the input positions into named features. Each
feature is scored by zeroing its positions (occlusion), running the
occluded input through the surrogate, and taking the difference from
the reference output: con(x_i) = Y - X' (*) K. Scalar weights are
Frobenius norms of those difference matrices.
"""

from dataclasses import dataclass

import numpy as np

from .distill import forward
from .errors import SegmentationMismatch, UnknownFeature, UnsupportedSegmentation
from .runtime import WorkerPool
from .validation import as_complex_matrix, check_same_shape

__all__ = [
    "FeatureSegmentation",
    "FeatureMask",
    "ContributionMap",
    "block_grid",
    "columns",
    "rows",
    "custom",
    "mask_feature",
    "contribution",
    "contribution_map",
    "rank_features",
    "heatmap",
]


@dataclass(frozen=True)
class FeatureSegmentation:
    """Partition of an M x N grid into features.

    kind: "block", "columns", "rows" or "custom".
    masks: one boolean M x N array per feature, pairwise disjoint and
    jointly covering the grid. grid_shape is set for the regular kinds
    and gives the feature layout used by :func:`heatmap`.
    """

    kind: str
    extent: tuple
    masks: tuple
    grid_shape: tuple = None

    def __post_init__(self):
        cover = np.zeros(self.extent, dtype=int)
        for mask in self.masks:
            if mask.shape != self.extent:
                raise SegmentationMismatch(
                    f"feature mask shape {mask.shape} != extent {self.extent}"
                )
            cover += mask.astype(int)
        if not np.all(cover == 1):
            raise SegmentationMismatch("features must partition the grid exactly")

    @property
    def n_features(self):
        return len(self.masks)


@dataclass(frozen=True)
class FeatureMask:
    segmentation: FeatureSegmentation
    feature_id: int
    occluded: np.ndarray


@dataclass(frozen=True)
class ContributionMap:
    segmentation: FeatureSegmentation
    contributions: tuple
    weights: np.ndarray


def block_grid(extent, block_rows, block_cols):
    """Square/rectangular sub-block segmentation; edge blocks may be smaller."""
    m, n = extent
    if block_rows < 1 or block_cols < 1:
        raise ValueError("block dimensions must be >= 1")
    masks = []
    row_starts = list(range(0, m, block_rows))
    col_starts = list(range(0, n, block_cols))
    for i0 in row_starts:
        for j0 in col_starts:
            mask = np.zeros(extent, dtype=bool)
            mask[i0 : i0 + block_rows, j0 : j0 + block_cols] = True
            masks.append(mask)
    return FeatureSegmentation(
        kind="block",
        extent=(m, n),
        masks=tuple(masks),
        grid_shape=(len(row_starts), len(col_starts)),
    )


def columns(extent):
    """One feature per column (e.g. one clock cycle of a trace table)."""
    m, n = extent
    masks = []
    for j in range(n):
        mask = np.zeros(extent, dtype=bool)
        mask[:, j] = True
        masks.append(mask)
    return FeatureSegmentation(kind="columns", extent=(m, n), masks=tuple(masks), grid_shape=(1, n))


def rows(extent):
    """One feature per row."""
    m, n = extent
    masks = []
    for i in range(m):
        mask = np.zeros(extent, dtype=bool)
        mask[i, :] = True
        masks.append(mask)
    return FeatureSegmentation(kind="rows", extent=(m, n), masks=tuple(masks), grid_shape=(m, 1))


def custom(extent, index_sets):
    """Segmentation from explicit position lists [(row, col), ...] per feature."""
    masks = []
    for positions in index_sets:
        mask = np.zeros(extent, dtype=bool)
        for i, j in positions:
            mask[i, j] = True
        masks.append(mask)
    return FeatureSegmentation(kind="custom", extent=tuple(extent), masks=tuple(masks))


def _check_feature(seg, feature_id):
    if not isinstance(feature_id, (int, np.integer)) or not 0 <= feature_id < seg.n_features:
        raise UnknownFeature(f"feature {feature_id!r} not in [0, {seg.n_features})")


def mask_feature(x, seg, feature_id):
    """Occluded input X': the feature's positions zeroed, all others kept."""
    x = as_complex_matrix(x, "x")
    if x.shape != seg.extent:
        raise SegmentationMismatch(
            f"segmentation extent {seg.extent} does not match input shape {x.shape}"
        )
    _check_feature(seg, feature_id)
    occluded = x.copy()
    occluded[seg.masks[feature_id]] = 0
    return FeatureMask(segmentation=seg, feature_id=feature_id, occluded=occluded)


def contribution(x, y, model, seg, feature_id, pool=WorkerPool(1)):
    """con(x_i) = Y - X' (*) K for one feature."""
    y = as_complex_matrix(y, "y")
    check_same_shape(as_complex_matrix(x, "x"), y, "contribution")
    occluded = mask_feature(x, seg, feature_id).occluded
    return y - forward(model, occluded, pool)


def contribution_map(x, y, model, seg, pool=WorkerPool(1)):
    """Contribution matrix and Frobenius-norm weight for every feature."""
    cons = tuple(
        contribution(x, y, model, seg, fid, pool) for fid in range(seg.n_features)
    )
    weights = np.array([np.linalg.norm(c) for c in cons])
    return ContributionMap(segmentation=seg, contributions=cons, weights=weights)


def rank_features(cm):
    """Features by descending weight; ties broken by ascending feature id."""
    order = sorted(range(len(cm.weights)), key=lambda fid: (-cm.weights[fid], fid))
    return [(fid, float(cm.weights[fid])) for fid in order]


def heatmap(cm):
    """Weights on the segmentation grid, max-normalized into [0, 1]."""
    seg = cm.segmentation
    if seg.grid_shape is None:
        raise UnsupportedSegmentation("heatmap requires a block/columns/rows segmentation")
    grid = np.asarray(cm.weights, dtype=float).reshape(seg.grid_shape)
    peak = grid.max()
    if peak > 0:
        grid = grid / peak
    return grid
