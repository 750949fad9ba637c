"""Littlewood-Paley projectors and fractional-derivative multipliers.

The dyadic bump is ``s(xi) = chi(|xi|) - chi(2|xi|)`` built from the fixed
profile ``chi`` below, so that ``chi(2|xi|) + sum_{j>=0} s(xi / 2^j)``
telescopes exactly to 1 on the resolved band.  The low block (index j = -1)
is ``chi(2|xi|)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, SpectralField

__all__ = [
    "chi_profile", "lp_bump", "DyadicIndex", "resolved_blocks",
    "project_dyadic", "fractional_derivative", "dyadic_multiplier",
]


def chi_profile(r):
    """Smooth cutoff: 1 on [0,1], 0 on [2,inf), Gevrey roll-off between.

    chi(r) = exp(1 - 1/(1 - t^2)) with t = clip(r-1, 0, 1).
    """
    scalar = np.isscalar(r) or np.ndim(r) == 0
    t = np.clip(np.atleast_1d(np.asarray(r, dtype=float)) - 1.0, 0.0, 1.0)
    out = np.zeros_like(t)
    interior = t < 1.0
    ti = t[interior]
    out[interior] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return float(out[0]) if scalar else out.reshape(np.shape(r))


def lp_bump(r):
    """Dyadic annulus bump s(r) = chi(r) - chi(2r), supported on (1/2, 2)."""
    return chi_profile(r) - chi_profile(2.0 * np.asarray(r, dtype=float))


@dataclass(frozen=True)
class DyadicIndex:
    """Dyadic block index: lam = 2**j; j = -1 denotes the low block S0."""

    j: int

    def __post_init__(self):
        if self.j < -1:
            raise ValueError("dyadic index must be >= -1")

    @property
    def lam(self):
        return None if self.j == -1 else 2.0 ** self.j

    def validate(self, grid: GridSpec, kind="spatial"):
        if self.j == -1:
            return
        top = 2.0 ** int(np.ceil(np.log2(_band_radius(grid, kind))))
        if self.lam > top:
            raise ValueError(f"lambda = {self.lam} above resolved band {top}")


def _band_radius(grid: GridSpec, kind):
    """Largest |k| (or |k'|) on the frequency lattice, corners included."""
    axes = range(grid.ndim) if kind == "spacetime" else grid.spatial_axes()
    return float(np.sqrt(sum((np.pi * grid.points[a] / grid.extents[a]) ** 2
                             for a in axes)))


def resolved_blocks(grid: GridSpec, kind="spatial"):
    """All DyadicIndex values resolved by the grid (including j = -1).

    The top block index satisfies 2^jmax >= the lattice corner radius, so the
    blocks telescope to 1 on every lattice mode.
    """
    jmax = int(np.ceil(np.log2(_band_radius(grid, kind))))
    return [DyadicIndex(j) for j in range(-1, jmax + 1)]


def _freq_radius(grid: GridSpec, kind):
    ks = grid.wavenumber_mesh()
    if kind == "spatial" or kind == "cone":
        axes = grid.spatial_axes()
        r = np.sqrt(sum(ks[a] ** 2 for a in axes))
    elif kind == "spacetime":
        r = np.sqrt(sum(k ** 2 for k in ks))
    else:
        raise ValueError(f"unknown projector kind {kind!r}")
    return r, ks


def dyadic_multiplier(grid: GridSpec, index: DyadicIndex, kind="spatial"):
    """The grid array of the block multiplier (Nyquist planes zeroed)."""
    r, ks = _freq_radius(grid, kind)
    if index.j == -1:
        mult = chi_profile(2.0 * r)
    else:
        mult = lp_bump(r / index.lam)
    if kind == "cone":
        if not grid.includes_time:
            raise ValueError("cone blocks need a time axis")
        # |xi_0| <~ |xi'|: smooth cutoff, flat for |xi0| <= 2|xi'|.
        xi0 = np.abs(ks[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(r > 0, xi0 / np.maximum(r, 1e-300), np.inf)
        mult = mult * chi_profile(np.where(np.isfinite(ratio), ratio / 2.0, 2.0))
    mult[grid.nyquist_mask()] = 0.0
    return mult


def project_dyadic(f: SpectralField, index: DyadicIndex, kind="spatial"):
    """Apply the dyadic block projector S_lam (or S0, or the cone block)."""
    index.validate(f.grid, "spacetime" if kind == "spacetime" else "spatial")
    mult = dyadic_multiplier(f.grid, index, kind)
    return f.map_fourier(lambda h, g: h * mult)


def fractional_derivative(f: SpectralField, alpha, kind="spatial",
                          zero_mode_flag=None):
    """Fractional-derivative multiplier.

    kind = 'full'    : |xi|^alpha over all axes,
           'spatial' : |xi'|^alpha over the spatial axes,
           'bracket' : (1 + |xi'|^2)^(alpha/2).

    For negative powers of the homogeneous kinds the zero mode is multiplied
    by 0; when ``zero_mode_flag`` is a dict it records whether the input had
    a nonzero mean under key ``"zeroed_mean"``.
    """
    grid = f.grid
    ks = grid.wavenumber_mesh()
    if kind == "full":
        r2 = sum(k ** 2 for k in ks)
    elif kind in ("spatial", "bracket"):
        r2 = sum(ks[a] ** 2 for a in grid.spatial_axes())
    else:
        raise ValueError(f"unknown derivative kind {kind!r}")
    if kind == "bracket":
        mult = (1.0 + r2) ** (alpha / 2.0)
    else:
        with np.errstate(divide="ignore"):
            mult = np.where(r2 > 0, r2 ** (alpha / 2.0), 0.0 if alpha != 0 else 1.0)
    mult = np.asarray(mult, dtype=float)
    mult[grid.nyquist_mask()] = 0.0
    if zero_mode_flag is not None and kind != "bracket" and alpha < 0:
        mean = f.fourier[0].flat[0]
        zero_mode_flag["zeroed_mean"] = bool(abs(mean) > 1e-12)
    return f.map_fourier(lambda h, g: h * mult)
