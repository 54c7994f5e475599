"""Worker-pool execution of the two-stage DFT and batched variants.

A transform is sharded along the axis whose 1-D transforms are
independent (columns for the left-multiply stage, rows for the
right-multiply stage). A :class:`DistributionTable` records every
shard's placement; merging always follows shard-sequence order, so the
result is bit-identical across runs regardless of which worker finishes
first.
"""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DimensionMismatch, EmptyInput
from .fourier import Normalization, fourier_matrix, inverse_fourier_matrix
from .validation import as_complex_matrix

__all__ = [
    "Axis",
    "Shard",
    "DistributionTable",
    "WorkerPool",
    "plan_split",
    "parallel_dft_2d",
    "parallel_batch_dft",
    "reduce_sum",
]


class Axis(enum.Enum):
    ROWS = "rows"
    COLUMNS = "columns"


@dataclass(frozen=True)
class Shard:
    source_id: object
    axis: Axis
    start: int
    count: int
    worker: int


@dataclass(frozen=True)
class DistributionTable:
    """Ordered shard placement record; merge order is sequence order."""

    shards: tuple

    def for_source(self, source_id):
        return [s for s in self.shards if s.source_id == source_id]


class WorkerPool:
    """Pool of p logical workers executing independent shards.

    p == 1 runs inline on the calling thread. For p > 1 shards run on a
    thread pool with BLAS pinned to one thread each, so shard
    granularity (not library-internal threading) bounds parallelism.
    Results are always gathered in submission order.
    """

    def __init__(self, p=1):
        if p < 1:
            raise ValueError(f"worker count must be >= 1, got {p}")
        self.p = p

    def map_ordered(self, fn, items):
        items = list(items)
        if self.p == 1 or len(items) <= 1:
            return [fn(it) for it in items]
        with threadpool_limits(limits=1, user_api="blas"):
            with ThreadPoolExecutor(max_workers=self.p) as ex:
                return list(ex.map(fn, items))

    def __repr__(self):
        return f"WorkerPool(p={self.p})"


def plan_split(extent, p, axis=Axis.ROWS, source_id=0):
    """Split ``extent`` 1-D transforms over p workers.

    The first ``extent mod p`` workers get ceil(extent/p) transforms,
    the rest floor(extent/p); excess workers receive empty shards. This
    honors the at-most-ceil(extent/p) per-worker workload bound.
    """
    if extent < 1:
        raise ValueError(f"extent must be >= 1, got {extent}")
    if p < 1:
        raise ValueError(f"worker count must be >= 1, got {p}")
    base, extra = divmod(extent, p)
    shards = []
    start = 0
    for w in range(p):
        count = base + (1 if w < extra else 0)
        shards.append(Shard(source_id=source_id, axis=axis, start=start, count=count, worker=w))
        start += count
    return DistributionTable(shards=tuple(shards))


def _basis(order, norm, inverse):
    if inverse:
        return inverse_fourier_matrix(order, norm)
    return fourier_matrix(order, norm)


def parallel_dft_2d(x, norm=Normalization.UNNORMALIZED, pool=WorkerPool(1), inverse=False):
    """2-D (i)DFT with both stages sharded across the pool.

    Equals the serial two-stage transform (bit-identical for p == 1)
    and is deterministic across runs for any fixed p.
    """
    results = parallel_batch_dft([x], norm, pool, inverse=inverse)
    return results[0]


def parallel_batch_dft(inputs, norm=Normalization.UNNORMALIZED, pool=WorkerPool(1), inverse=False):
    """Transform a batch of matrices, interleaving shards from all inputs.

    Each stage plans shards for every input, executes them in a single
    wave on the pool, and reassembles per source via the distribution
    table. A barrier separates the column stage from the row stage.
    """
    xs = [as_complex_matrix(x, f"inputs[{i}]") for i, x in enumerate(inputs)]
    if not xs:
        return []

    mats = {}
    for x in xs:
        for order in x.shape:
            if order not in mats:
                mats[order] = _basis(order, norm, inverse)

    # Stage 1: X' = W_M @ x, one 1-D transform per column.
    table1 = DistributionTable(
        shards=tuple(
            s
            for sid, x in enumerate(xs)
            for s in plan_split(x.shape[1], pool.p, Axis.COLUMNS, sid).shards
        )
    )

    def run_stage1(shard):
        x = xs[shard.source_id]
        if shard.count == 0:
            return np.empty((x.shape[0], 0), dtype=np.complex128)
        return mats[x.shape[0]] @ x[:, shard.start : shard.start + shard.count]

    stage1_parts = pool.map_ordered(run_stage1, table1.shards)
    intermediates = []
    for sid, x in enumerate(xs):
        inter = np.empty_like(x)
        for shard, part in zip(table1.shards, stage1_parts):
            if shard.source_id == sid and shard.count:
                inter[:, shard.start : shard.start + shard.count] = part
        intermediates.append(inter)

    # Barrier, then stage 2: X = X' @ W_N, one 1-D transform per row.
    table2 = DistributionTable(
        shards=tuple(
            s
            for sid, x in enumerate(xs)
            for s in plan_split(x.shape[0], pool.p, Axis.ROWS, sid).shards
        )
    )

    def run_stage2(shard):
        inter = intermediates[shard.source_id]
        if shard.count == 0:
            return np.empty((0, inter.shape[1]), dtype=np.complex128)
        return inter[shard.start : shard.start + shard.count, :] @ mats[inter.shape[1]]

    stage2_parts = pool.map_ordered(run_stage2, table2.shards)
    outputs = []
    for sid, x in enumerate(xs):
        out = np.empty_like(x)
        for shard, part in zip(table2.shards, stage2_parts):
            if shard.source_id == sid and shard.count:
                out[shard.start : shard.start + shard.count, :] = part
        outputs.append(out)
    return outputs


def reduce_sum(partials):
    """Elementwise sum of same-shape matrices, accumulated in sequence order."""
    mats = [as_complex_matrix(p, f"partials[{i}]") for i, p in enumerate(partials)]
    if not mats:
        raise EmptyInput("reduce_sum requires at least one partial")
    shape = mats[0].shape
    for i, m in enumerate(mats[1:], start=1):
        if m.shape != shape:
            raise DimensionMismatch(
                f"reduce_sum: partials[{i}] has shape {m.shape}, expected {shape}"
            )
    acc = mats[0].copy()
    for m in mats[1:]:
        acc += m
    return acc
