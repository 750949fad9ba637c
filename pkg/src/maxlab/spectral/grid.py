"""Periodic grids and the canonical discrete Fourier conventions.

All fields live on a uniform periodic lattice over a box ``[0, L_i)`` per
axis.  The frequency lattice per axis is ``k = (2*pi/L) * {-N/2, ..., N/2-1}``
in fftfreq layout; the Nyquist mode (index N/2) carries a sign ambiguity and
is zeroed by every smooth multiplier built on top of this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["GridSpec", "SpectralField", "make_grid"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid.

    Parameters
    ----------
    extents : tuple of float
        Box length per axis.  When ``includes_time`` the first axis is time.
    points : tuple of int
        Sample count per axis; even and >= 8.
    includes_time : bool
        Whether axis 0 is the time axis.
    """

    extents: tuple
    points: tuple
    includes_time: bool = False

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(float(L) for L in self.extents))
        object.__setattr__(self, "points", tuple(int(n) for n in self.points))
        if len(self.extents) != len(self.points):
            raise ValueError("extents and points must have equal length")
        if not 1 <= len(self.points) <= 3:
            raise ValueError("grids are 1- to 3-dimensional")
        for n in self.points:
            if n < 8:
                raise ValueError(f"points per axis must be >= 8, got {n}")
            if n % 2:
                raise ValueError(f"points per axis must be even, got {n}")
        for L in self.extents:
            if not L > 0:
                raise ValueError(f"extents must be positive, got {L}")

    @property
    def ndim(self):
        return len(self.points)

    @property
    def dt_implied(self):
        if not self.includes_time:
            return None
        return self.extents[0] / self.points[0]

    @property
    def spacings(self):
        return tuple(L / n for L, n in zip(self.extents, self.points))

    def axis_coords(self, axis):
        L, n = self.extents[axis], self.points[axis]
        return np.arange(n) * (L / n)

    def axis_wavenumbers(self, axis):
        L, n = self.extents[axis], self.points[axis]
        return 2.0 * np.pi / L * np.fft.fftfreq(n, 1.0 / n)

    def coord_mesh(self):
        return np.meshgrid(*(self.axis_coords(a) for a in range(self.ndim)),
                           indexing="ij")

    def wavenumber_mesh(self):
        return np.meshgrid(*(self.axis_wavenumbers(a) for a in range(self.ndim)),
                           indexing="ij")

    def spatial_axes(self):
        return tuple(range(1, self.ndim)) if self.includes_time else tuple(range(self.ndim))

    def nyquist_mask(self, axes=None):
        """Boolean mask, True on any Nyquist plane of the listed axes."""
        if axes is None:
            axes = range(self.ndim)
        mask = np.zeros(self.points, dtype=bool)
        for a in axes:
            sl = [slice(None)] * self.ndim
            sl[a] = self.points[a] // 2
            mask[tuple(sl)] = True
        return mask

    def spatial_nyquist(self):
        """Largest resolvable |k'| over the spatial axes."""
        return min(np.pi * self.points[a] / self.extents[a] for a in self.spatial_axes())

    def cell_volume(self):
        v = 1.0
        for h in self.spacings:
            v *= h
        return v


def make_grid(extents, points, includes_time=False) -> GridSpec:
    """Validate and build a :class:`GridSpec`.

    Scalars are promoted to per-axis tuples when the other argument fixes the
    dimension.
    """
    if np.isscalar(points):
        points = (points,)
    if np.isscalar(extents):
        extents = tuple(extents for _ in points)
    return GridSpec(tuple(extents), tuple(points), includes_time)


class SpectralField:
    """A 1- or 3-component real field with a write-once Fourier cache.

    Component roles for 3-component fields are (D1, D2, H) in that order.
    """

    def __init__(self, grid: GridSpec, components):
        if isinstance(components, np.ndarray) and components.ndim == grid.ndim:
            components = (components,)
        components = tuple(np.asarray(c) for c in components)
        if len(components) not in (1, 3):
            raise ValueError("fields carry 1 or 3 components")
        for c in components:
            if c.shape != tuple(grid.points):
                raise ValueError(f"component shape {c.shape} != grid {grid.points}")
            if not np.all(np.isfinite(c)):
                raise ValueError("non-finite component values")
        self.grid = grid
        self.components = components
        self._hat = None

    @property
    def ncomp(self):
        return len(self.components)

    @property
    def fourier(self):
        """Tuple of forward FFTs of the components (cached)."""
        if self._hat is None:
            self._hat = tuple(np.fft.fftn(c) for c in self.components)
        return self._hat

    def map_fourier(self, fn):
        """Apply ``fn(hat, grid)`` to each component spectrum; new field."""
        outs = tuple(np.fft.ifftn(fn(h, self.grid)) for h in self.fourier)
        if all(np.isrealobj(c) for c in self.components):
            outs = tuple(np.real(o) for o in outs)
        return SpectralField(self.grid, outs)

    def l2(self):
        w = self.grid.cell_volume()
        return float(np.sqrt(sum(np.sum(np.abs(c) ** 2) for c in self.components) * w))

    def copy(self):
        return SpectralField(self.grid, tuple(c.copy() for c in self.components))

    def __add__(self, other):
        self._check(other)
        return SpectralField(self.grid, tuple(a + b for a, b in
                                              zip(self.components, other.components)))

    def __sub__(self, other):
        self._check(other)
        return SpectralField(self.grid, tuple(a - b for a, b in
                                              zip(self.components, other.components)))

    def __mul__(self, c):
        return SpectralField(self.grid, tuple(c * a for a in self.components))

    __rmul__ = __mul__

    def _check(self, other):
        if other.grid != self.grid or other.ncomp != self.ncomp:
            raise ValueError("field mismatch")
