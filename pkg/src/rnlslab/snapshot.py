"""Bit-exact binary snapshot format for complex fields.

Layout (little-endian throughout):

    bytes 0..3   magic "RNLS"
    u32          format version (= 1)
    u32          dimension d
    per axis j:  u32 N_j, f64 L_j
    f64          time t
    N_1*...*N_d  complex samples as (re f64, im f64) pairs, row-major

The format is the only coupling surface for external renderers.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import SnapshotFormatError
from .field import ComplexField, GridSpec, make_grid

MAGIC = b"RNLS"
VERSION = 1


def write_snapshot(path, field: ComplexField, t: float = 0.0) -> None:
    grid = field.grid
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, grid.d))
        for N, L in zip(grid.points, grid.half_width):
            fh.write(struct.pack("<Id", N, L))
        fh.write(struct.pack("<d", float(t)))
        flat = np.ascontiguousarray(field.values, dtype=np.complex128).ravel()
        interleaved = flat.view(np.float64)
        if interleaved.dtype.byteorder not in ("<", "="):  # pragma: no cover
            interleaved = interleaved.astype("<f8")
        fh.write(interleaved.tobytes())


def read_snapshot(path) -> tuple[ComplexField, float]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12 or raw[:4] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic, not a field snapshot")
    version, d = struct.unpack_from("<II", raw, 4)
    if version != VERSION:
        raise SnapshotFormatError(f"{path}: unsupported format version {version}")
    if d not in (1, 2, 3):
        raise SnapshotFormatError(f"{path}: bad dimension {d}")
    off = 12
    points, half_width = [], []
    for _ in range(d):
        if off + 12 > len(raw):
            raise SnapshotFormatError(f"{path}: truncated axis table")
        N, L = struct.unpack_from("<Id", raw, off)
        points.append(N)
        half_width.append(L)
        off += 12
    if off + 8 > len(raw):
        raise SnapshotFormatError(f"{path}: truncated header")
    (t,) = struct.unpack_from("<d", raw, off)
    off += 8
    grid = _grid_from_header(d, half_width, points, path)
    n_samples = grid.size
    need = n_samples * 16
    if len(raw) - off != need:
        raise SnapshotFormatError(
            f"{path}: expected {need} payload bytes, found {len(raw) - off}"
        )
    flat = np.frombuffer(raw, dtype="<c16", count=n_samples, offset=off)
    values = flat.astype(np.complex128).reshape(grid.shape)
    finite = bool(np.all(np.isfinite(values.view(np.float64))))
    return ComplexField(grid, values, blown_up=not finite), float(t)


def _grid_from_header(d, half_width, points, path) -> GridSpec:
    try:
        return make_grid(d, half_width, points)
    except Exception as exc:
        raise SnapshotFormatError(f"{path}: bad grid header ({exc})") from exc
