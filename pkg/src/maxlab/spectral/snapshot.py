"""Binary snapshot container for grid fields.

Layout: magic "MXW2", version u32, dims u32*3 (unused axes = 1), extents
f64*3 (unused axes = 0), then each component as row-major little-endian f64,
components concatenated in field order.  Single-component variants store one
block; the component count is recoverable from the payload size.
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import GridSpec, SpectralField

__all__ = ["write_snapshot", "read_snapshot", "MAGIC", "VERSION"]

MAGIC = b"MXW2"
VERSION = 1


def write_snapshot(path, f: SpectralField, includes_time=None):
    g = f.grid
    dims = list(g.points) + [1] * (3 - g.ndim)
    exts = list(g.extents) + [0.0] * (3 - g.ndim)
    flags = 1 if g.includes_time else 0
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, flags))
        fh.write(struct.pack("<III", *dims))
        fh.write(struct.pack("<ddd", *exts))
        for c in f.components:
            fh.write(np.ascontiguousarray(c, dtype="<f8").tobytes())


def read_snapshot(path) -> SpectralField:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError("bad snapshot magic")
        version, flags = struct.unpack("<II", fh.read(8))
        if version != VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        dims = struct.unpack("<III", fh.read(12))
        exts = struct.unpack("<ddd", fh.read(24))
        payload = fh.read()
    dims = tuple(d for d in dims if d > 1)
    exts = tuple(e for e in exts if e > 0)
    count = int(np.prod(dims))
    ncomp = len(payload) // (8 * count)
    if ncomp * 8 * count != len(payload) or ncomp not in (1, 3):
        raise ValueError("snapshot payload size mismatch")
    grid = GridSpec(exts, dims, includes_time=bool(flags))
    comps = []
    for i in range(ncomp):
        arr = np.frombuffer(payload, dtype="<f8", count=count, offset=8 * count * i)
        comps.append(arr.reshape(dims).copy())
    return SpectralField(grid, tuple(comps))
