"""On-disk matrix formats.

Two formats: human-editable CSV (real values only) and the exact binary
CDM format for complex intermediates. CDM layout: magic ``CDM1``, rows
and cols as 64-bit little-endian unsigned integers, then row-major
entries as interleaved little-endian float64 (re, im). PGM (P2) is the
heatmap export format.
"""

import struct

import numpy as np

from .errors import MatrixFormatError
from .validation import as_complex_matrix

__all__ = [
    "CDM_MAGIC",
    "read_matrix",
    "read_csv_matrix",
    "write_csv_matrix",
    "read_cdm",
    "write_cdm",
    "write_pgm",
]

CDM_MAGIC = b"CDM1"
_HEADER = struct.Struct("<4sQQ")


def read_csv_matrix(path):
    """Parse a CSV of decimal reals; blank lines ignored, must be rectangular."""
    rows = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise MatrixFormatError(
                    f"{path}:{lineno}: expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise MatrixFormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise MatrixFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float).astype(np.complex128)


def write_csv_matrix(path, matrix):
    """Write the real part as CSV using shortest round-trippable decimals."""
    matrix = as_complex_matrix(matrix, "matrix")
    with open(path, "w", encoding="ascii") as fh:
        for row in matrix:
            fh.write(",".join(repr(float(v.real)) for v in row))
            fh.write("\n")


def read_cdm(path):
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise MatrixFormatError(f"{path}: truncated CDM header")
        magic, rows, cols = _HEADER.unpack(header)
        if magic != CDM_MAGIC:
            raise MatrixFormatError(f"{path}: bad magic {magic!r}")
        if rows < 1 or cols < 1:
            raise MatrixFormatError(f"{path}: invalid dimensions {rows}x{cols}")
        payload = fh.read()
    expected = 16 * rows * cols
    if len(payload) != expected:
        raise MatrixFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    flat = np.frombuffer(payload, dtype="<f8").reshape(rows, cols, 2)
    return (flat[:, :, 0] + 1j * flat[:, :, 1]).astype(np.complex128)


def write_cdm(path, matrix):
    matrix = as_complex_matrix(matrix, "matrix")
    rows, cols = matrix.shape
    interleaved = np.empty((rows, cols, 2), dtype="<f8")
    interleaved[:, :, 0] = matrix.real
    interleaved[:, :, 1] = matrix.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CDM_MAGIC, rows, cols))
        fh.write(interleaved.tobytes())


def read_matrix(path):
    """Load a matrix, sniffing CDM by magic and falling back to CSV."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == CDM_MAGIC:
        return read_cdm(path)
    return read_csv_matrix(path)


def write_pgm(path, grid):
    """Write a [0, 1] grid as an ASCII (P2) PGM with maxval 255."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2:
        raise ValueError(f"PGM grid must be 2-D, got ndim={grid.ndim}")
    pixels = np.clip(np.rint(grid * 255), 0, 255).astype(int)
    lines = [f"P2", f"{grid.shape[1]} {grid.shape[0]}", "255"]
    lines += [" ".join(str(v) for v in row) for row in pixels]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
