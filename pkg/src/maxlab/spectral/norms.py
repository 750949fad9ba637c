"""Mixed Lebesgue, Sobolev, Besov, and X^s norms on grid fields."""

from __future__ import annotations

import numpy as np

from .grid import GridSpec, SpectralField
from .lp import DyadicIndex, fractional_derivative, project_dyadic, resolved_blocks

__all__ = ["mixed_norm", "function_space_norm"]


def _pointwise_abs(f: SpectralField):
    if f.ncomp == 1:
        return np.abs(f.components[0])
    return np.sqrt(sum(np.abs(c) ** 2 for c in f.components))


def _lq_spatial(vals, grid: GridSpec, q):
    """Inner spatial L^q of |f| per time slice (axis 0 = time)."""
    axes = tuple(a - 1 for a in grid.spatial_axes())  # after dropping time
    w = 1.0
    for a in grid.spatial_axes():
        w *= grid.spacings[a]
    # vals has shape (Nt, spatial...)
    flat = vals.reshape(vals.shape[0], -1)
    if np.isinf(q):
        return flat.max(axis=1)
    return (np.sum(flat ** q, axis=1) * w) ** (1.0 / q)


def mixed_norm(f: SpectralField, p, q, time_window=None):
    """L^p in time of the spatial L^q norm, over ``time_window=(t0,t1)``.

    Sup norms (p or q infinite) are grid maxima without quadrature weights.
    """
    grid = f.grid
    if not grid.includes_time:
        raise ValueError("mixed_norm needs a grid with a time axis")
    if not (1 <= p) or not (1 <= q):
        raise ValueError("p, q must be in [1, inf]")
    t = grid.axis_coords(0)
    if time_window is None:
        sel = slice(None)
    else:
        t0, t1 = time_window
        if t0 < 0 or t1 > grid.extents[0] or t1 <= t0:
            raise ValueError(f"time window {time_window} outside grid [0, {grid.extents[0]}]")
        sel = (t >= t0 - 1e-12) & (t <= t1 + 1e-12)
    vals = _pointwise_abs(f)[sel]
    inner = _lq_spatial(vals, grid, q)
    if np.isinf(p):
        return float(inner.max())
    dt = grid.spacings[0]
    return float((np.sum(inner ** p) * dt) ** (1.0 / p))


def _sobolev(f: SpectralField, s, homogeneous=False):
    kind = "spatial" if homogeneous else "bracket"
    g = fractional_derivative(f, s, kind=kind)
    return g.l2()


def function_space_norm(f: SpectralField, spec):
    """Norm selected by ``spec``.

    spec = ("sobolev", s)            : <D'>^s L2 (use ("sobolev_h", s) for |D'|^s L2)
    spec = ("besov", p, q, r, s)     : dyadic sum over resolved space-time blocks
    spec = ("xs", s)                 : sup_lam lam^s ||S_lam f||_{L1 L^inf}
    """
    tag = spec[0]
    if tag == "sobolev":
        return _sobolev(f, spec[1], homogeneous=False)
    if tag == "sobolev_h":
        return _sobolev(f, spec[1], homogeneous=True)
    if tag == "besov":
        p, q, r, s = spec[1:]
        kind = "spacetime" if f.grid.includes_time else "spatial"
        terms = []
        for idx in resolved_blocks(f.grid, kind):
            if idx.j == -1:
                continue
            blk = project_dyadic(f, idx, kind=kind)
            if f.grid.includes_time:
                nrm = mixed_norm(blk, p, q)
            else:
                nrm = _flat_lp(blk, p) if p == q else None
                if nrm is None:
                    raise ValueError("space-only Besov needs p == q")
            terms.append((idx.lam ** s) * nrm)
        terms = np.asarray(terms)
        if np.isinf(r):
            return float(terms.max(initial=0.0))
        return float(np.sum(terms ** r) ** (1.0 / r))
    if tag == "xs":
        s = spec[1]
        best = 0.0
        for idx in resolved_blocks(f.grid, "spatial"):
            if idx.j == -1:
                continue
            blk = project_dyadic(f, idx, kind="spatial")
            best = max(best, idx.lam ** s * mixed_norm(blk, 1, np.inf))
        return float(best)
    raise ValueError(f"unknown norm spec {spec!r}")


def _flat_lp(f: SpectralField, p):
    vals = _pointwise_abs(f)
    if np.isinf(p):
        return float(vals.max())
    return float((np.sum(vals ** p) * f.grid.cell_volume()) ** (1.0 / p))
