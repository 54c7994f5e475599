"""Command-line interface.

Subcommands: ``fft`` (forward/inverse 2-D transform), ``distill`` (fit a
kernel from recorded pairs), ``explain`` (per-feature contribution
weights and heatmap), ``bench`` (scalability report comparing the
direct, serial two-stage, and parallel transform paths).

Exit codes: 0 success, 2 parse/malformed input, 3 dimension or format
mismatch, 4 numerical ill-conditioning.
"""

import argparse
import os
import sys
import time

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .distill import AUTO_LAMBDA, DistilledModel, fit_error, solve_kernel_batch
from .errors import (
    ConvDistillError,
    DimensionMismatch,
    DivisionNearZero,
    MatrixFormatError,
    SegmentationMismatch,
)
from .explain import block_grid, columns, contribution_map, heatmap, rank_features, rows
from .fourier import Normalization, dft_2d_direct, dft_2d_two_stage
from .matrix_io import read_matrix, write_cdm, write_pgm
from .runtime import WorkerPool, parallel_dft_2d

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_ILL_CONDITIONED = 4

# The definitional O(M^2 N^2) reference becomes impractical past this size.
DIRECT_BENCH_CUTOFF = 256


def _default_cores():
    return int(os.environ.get("CONVDISTILL_CORES", "1"))


def _norm(name):
    return Normalization.UNITARY if name == "unitary" else Normalization.UNNORMALIZED


def _lambda_arg(text):
    if text == AUTO_LAMBDA:
        return AUTO_LAMBDA
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("lambda must be >= 0")
    return value


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _seg_arg(text):
    if text in ("cols", "rows"):
        return (text, None)
    if text.startswith("block:"):
        try:
            r, c = (int(v) for v in text[len("block:") :].split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected block:R,C, got {text!r}")
        if r < 1 or c < 1:
            raise argparse.ArgumentTypeError("block dimensions must be >= 1")
        return ("block", (r, c))
    raise argparse.ArgumentTypeError(f"expected block:R,C, cols or rows, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="convdistill",
        description="Distill models into circular-convolution surrogates and explain them.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fft = sub.add_parser("fft", help="2-D discrete Fourier transform of a matrix file")
    p_fft.add_argument("input", help="input matrix (CSV or CDM, sniffed by magic)")
    p_fft.add_argument("output", help="output path (CDM)")
    p_fft.add_argument("--norm", choices=["unitary", "unnorm"], default="unnorm")
    p_fft.add_argument("--cores", type=int, default=None)
    p_fft.add_argument("--inverse", action="store_true")

    p_dist = sub.add_parser("distill", help="fit a convolution kernel from (X, Y) pairs")
    p_dist.add_argument("--x", nargs="+", required=True, help="input matrix files")
    p_dist.add_argument("--y", nargs="+", required=True, help="output matrix files")
    p_dist.add_argument("--lambda", dest="reg_lambda", type=_lambda_arg, default=0.0)
    p_dist.add_argument("--cores", type=int, default=None)
    p_dist.add_argument("--out", required=True, help="kernel output path (CDM)")

    p_exp = sub.add_parser("explain", help="per-feature contribution weights and heatmap")
    p_exp.add_argument("--x", required=True)
    p_exp.add_argument("--y", required=True)
    p_exp.add_argument("--model", required=True, help="kernel file written by distill")
    p_exp.add_argument("--seg", type=_seg_arg, default=("cols", None))
    p_exp.add_argument("--cores", type=int, default=None)
    p_exp.add_argument("--out-prefix", required=True)

    p_bench = sub.add_parser("bench", help="transform scalability report")
    p_bench.add_argument("--sizes", type=_int_list, required=True)
    p_bench.add_argument("--cores", type=_int_list, default=[1])
    p_bench.add_argument("--out", required=True, help="report CSV path")

    return parser


def _cores(args):
    p = args.cores if args.cores is not None else _default_cores()
    if p < 1:
        raise ValueError(f"--cores must be >= 1, got {p}")
    return p


def cmd_fft(args):
    matrix = read_matrix(args.input)
    pool = WorkerPool(_cores(args))
    result = parallel_dft_2d(matrix, _norm(args.norm), pool, inverse=args.inverse)
    write_cdm(args.output, result)
    return EXIT_OK


def cmd_distill(args):
    if len(args.x) != len(args.y):
        raise DimensionMismatch(
            f"got {len(args.x)} --x files but {len(args.y)} --y files"
        )
    pairs = [(read_matrix(px), read_matrix(py)) for px, py in zip(args.x, args.y)]
    pool = WorkerPool(_cores(args))
    model = solve_kernel_batch(pairs, args.reg_lambda, pool)
    err = fit_error(model, pairs, pool)
    write_cdm(args.out, model.kernel)
    with open(args.out + ".meta", "w", encoding="ascii") as fh:
        fh.write(f"lambda = {model.lam!r}\n")
        fh.write(f"rows = {model.kernel.shape[0]}\n")
        fh.write(f"cols = {model.kernel.shape[1]}\n")
        fh.write(f"fit_error = {err!r}\n")
    return EXIT_OK


def _build_segmentation(seg, extent):
    kind, block = seg
    if kind == "cols":
        return columns(extent)
    if kind == "rows":
        return rows(extent)
    return block_grid(extent, *block)


def cmd_explain(args):
    x = read_matrix(args.x)
    y = read_matrix(args.y)
    kernel = read_matrix(args.model)
    model = DistilledModel(kernel=kernel)
    pool = WorkerPool(_cores(args))
    seg = _build_segmentation(args.seg, x.shape)

    cm = contribution_map(x, y, model, seg, pool)
    ranking = rank_features(cm)
    rank_of = {fid: i + 1 for i, (fid, _) in enumerate(ranking)}
    with open(args.out_prefix + "_weights.csv", "w", encoding="ascii") as fh:
        fh.write("feature_id,weight,rank\n")
        for fid in range(seg.n_features):
            fh.write(f"{fid},{cm.weights[fid]!r},{rank_of[fid]}\n")
    write_pgm(args.out_prefix + "_heatmap.pgm", heatmap(cm))

    total = np.sum(cm.contributions, axis=0)
    scale = max(np.abs(y).max(), np.finfo(float).tiny)
    residual = float(np.abs(total - y).max() / scale)
    print(f"features = {seg.n_features}")
    print(f"reconstruction_residual = {residual:.3e}")
    return EXIT_OK


def _max_rel_error(result, reference):
    scale = np.abs(reference).max()
    if scale == 0:
        return float(np.abs(result - reference).max())
    return float(np.abs(result - reference).max() / scale)


def cmd_bench(args):
    for size in args.sizes:
        if size < 2:
            raise ValueError(f"--sizes entries must be >= 2, got {size}")
    rng = np.random.default_rng(2024)
    rows_out = ["size,method,workers,wall_ms,max_rel_error"]
    norm = Normalization.UNNORMALIZED
    for size in args.sizes:
        x = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        with threadpool_limits(limits=1, user_api="blas"):
            reference = None
            if size <= DIRECT_BENCH_CUTOFF:
                t0 = time.perf_counter()
                reference = dft_2d_direct(x, norm)
                direct_ms = (time.perf_counter() - t0) * 1e3
                rows_out.append(f"{size},direct,1,{direct_ms:.3f},0.0")
            else:
                rows_out.append(f"{size},direct,1,n/a,n/a")

            t0 = time.perf_counter()
            serial = dft_2d_two_stage(x, norm)
            serial_ms = (time.perf_counter() - t0) * 1e3
            err = _max_rel_error(serial, reference) if reference is not None else "n/a"
            rows_out.append(f"{size},two-stage-serial,1,{serial_ms:.3f},{err}")

            for p in args.cores:
                pool = WorkerPool(p)
                t0 = time.perf_counter()
                result = parallel_dft_2d(x, norm, pool)
                par_ms = (time.perf_counter() - t0) * 1e3
                err = _max_rel_error(result, reference) if reference is not None else "n/a"
                rows_out.append(f"{size},parallel-p{p},{p},{par_ms:.3f},{err}")

    with open(args.out, "w", encoding="ascii") as fh:
        fh.write("\n".join(rows_out) + "\n")
    return EXIT_OK


_COMMANDS = {
    "fft": cmd_fft,
    "distill": cmd_distill,
    "explain": cmd_explain,
    "bench": cmd_bench,
}


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MatrixFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DivisionNearZero as exc:
        print(
            f"error: {exc}\nhint: the input spectrum is singular; "
            "raise --lambda (or use --lambda auto)",
            file=sys.stderr,
        )
        return EXIT_ILL_CONDITIONED
    except (DimensionMismatch, SegmentationMismatch, ConvDistillError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION


def main(argv=None):
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
