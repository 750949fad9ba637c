"""The first-order Maxwell operator and its microlocal diagonalizer.

The coefficients are time-independent, so the time derivative is either
spectral along a time axis or — for the frequency-sliced probe path — the
scalar multiplier i·ξ₀.  All spatial derivatives are spectral; coefficient
products are pointwise in divergence form (derivative applied after the
multiplication wherever the operator display says so).
"""

from __future__ import annotations

import numpy as np

from ..spectral.grid import GridSpec, SpectralField
from .weighted import WeightedNormOperator

__all__ = ["MaxwellOperators", "apply_maxwell_P", "apply_diagonalizer"]


class MaxwellOperators:
    """P, M, D, N and their adjoints on a fixed spatial grid and block.

    Fields are ndarrays of shape (3, ..., N1, N2); the time derivative is
    the scalar i·xi0 passed per call (slice-wise application; the full
    space-time operators loop this over the time frequencies).
    """

    def __init__(self, model, grid: GridSpec, lam, truncate=True, tol=1e-10):
        self.grid = grid
        self.lam = float(lam)
        op_model = model.truncated(np.sqrt(lam)) if truncate else model
        xs = grid.axis_coords(0)
        ys = grid.axis_coords(1)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        self.e11, self.e12, self.e22 = op_model.inv_entries(X, Y)
        K1, K2 = grid.wavenumber_mesh()
        keep = ~grid.nyquist_mask()
        self.ik1 = 1j * K1 * keep
        self.ik2 = 1j * K2 * keep
        self._op_model = op_model
        self._tol = tol
        self._W = None
        self._Q = None

    @property
    def W(self):
        if self._W is None:
            self._W = WeightedNormOperator(self._op_model, self.grid, self.lam,
                                           reciprocal=False, tol=self._tol)
        return self._W

    @property
    def Q(self):
        if self._Q is None:
            self._Q = WeightedNormOperator(self._op_model, self.grid, self.lam,
                                           reciprocal=True, tol=self._tol)
        return self._Q

    # spectral spatial derivatives, broadcasting over leading axes
    def _d1(self, f):
        return np.fft.ifft2(self.ik1 * np.fft.fft2(f, axes=(-2, -1)), axes=(-2, -1))

    def _d2(self, f):
        return np.fft.ifft2(self.ik2 * np.fft.fft2(f, axes=(-2, -1)), axes=(-2, -1))

    def apply_P(self, u, xi0):
        u1, u2, u3 = u
        dt = 1j * xi0
        v1 = dt * u1 - self._d2(u3)
        v2 = dt * u2 + self._d1(u3)
        v3 = (self._d1(self.e12 * u1 + self.e22 * u2)
              - self._d2(self.e11 * u1 + self.e12 * u2) + dt * u3)
        return np.stack([v1, v2, v3])

    def apply_P_adjoint(self, v, xi0):
        v1, v2, v3 = v
        dt = 1j * xi0
        w1 = -dt * v1 + self.e11 * self._d2(v3) - self.e12 * self._d1(v3)
        w2 = -dt * v2 + self.e12 * self._d2(v3) - self.e22 * self._d1(v3)
        w3 = self._d2(v1) - self._d1(v2) - dt * v3
        return np.stack([w1, w2, w3])

    def apply_N(self, u):
        u1, u2, u3 = u
        w1, w2 = self.Q.apply(u1), self.Q.apply(u2)
        v1 = 1j * (self._d1(w1) + self._d2(w2))
        t = 0.5j * (self.e12 * self._d1(w1) - self.e11 * self._d2(w1)
                    + self.e22 * self._d1(w2) - self.e12 * self._d2(w2))
        return np.stack([v1, t + 0.5 * u3, -t + 0.5 * u3])

    def apply_N_adjoint(self, v):
        v1, v2, v3 = v
        s = v2 - v3
        w1 = 1j * self._d1(v1) + 0.5j * (self._d1(self.e12 * s)
                                         - self._d2(self.e11 * s))
        w2 = 1j * self._d2(v1) + 0.5j * (self._d1(self.e22 * s)
                                         - self._d2(self.e12 * s))
        return np.stack([self.Q.apply_adjoint(w1), self.Q.apply_adjoint(w2),
                         0.5 * (v2 + v3)])

    def apply_D(self, u, xi0):
        u1, u2, u3 = u
        dt = 1j * xi0
        return np.stack([dt * u1,
                         dt * u2 - 1j * self.W.apply(u2),
                         dt * u3 + 1j * self.W.apply(u3)])

    def apply_D_adjoint(self, v, xi0):
        v1, v2, v3 = v
        dt = 1j * xi0
        return np.stack([-dt * v1,
                         -dt * v2 + 1j * self.W.apply_adjoint(v2),
                         -dt * v3 - 1j * self.W.apply_adjoint(v3)])

    def apply_M(self, u):
        u1, u2, u3 = u
        g1 = (self._d1(self.e22 * u1) - self._d2(self.e12 * u1)
              - self._d2(u2) + self._d2(u3))
        g2 = (self._d2(self.e11 * u1) - self._d1(self.e12 * u1)
              + self._d1(u2) - self._d1(u3))
        return np.stack([1j * self.Q.apply(g1), 1j * self.Q.apply(g2), u2 + u3])

    def apply_M_adjoint(self, v):
        v1, v2, v3 = v
        q1 = -1j * self.Q.apply_adjoint(v1)
        q2 = -1j * self.Q.apply_adjoint(v2)
        w1 = (-self.e22 * self._d1(q1) + self.e12 * self._d2(q1)
              - self.e11 * self._d2(q2) + self.e12 * self._d1(q2))
        w2 = self._d2(q1) - self._d1(q2) + v3
        w3 = -self._d2(q1) + self._d1(q2) + v3
        return np.stack([w1, w2, w3])

    def apply_MDN(self, u, xi0):
        return self.apply_M(self.apply_D(self.apply_N(u), xi0))

    def apply_MDN_adjoint(self, v, xi0):
        return self.apply_N_adjoint(self.apply_D_adjoint(self.apply_M_adjoint(v), xi0))

    def residual(self, u, xi0):
        return self.apply_MDN(u, xi0) - self.apply_P(u, xi0)

    def residual_adjoint(self, v, xi0):
        return self.apply_MDN_adjoint(v, xi0) - self.apply_P_adjoint(v, xi0)


def _spatial_subgrid(grid: GridSpec) -> GridSpec:
    ax = grid.spatial_axes()
    return GridSpec(tuple(grid.extents[a] for a in ax),
                    tuple(grid.points[a] for a in ax))


def _check_block(u: SpectralField, lam):
    """Error out unless u is (essentially) supported on the dyadic annulus."""
    grid = u.grid
    ax = grid.spatial_axes()
    ks = np.meshgrid(*(grid.axis_wavenumbers(a) for a in ax), indexing="ij")
    R = np.hypot(ks[0], ks[1])
    ok = (R >= lam / 4) & (R <= 4 * lam)
    comps = u.components
    axes = tuple(a - len(grid.points) for a in ax)
    bad = 0.0
    tot = 0.0
    for c in comps:
        ch = np.fft.fftn(c, axes=axes)
        mag2 = np.abs(ch) ** 2
        red = mag2.sum(axis=tuple(i for i in range(c.ndim) if i not in
                                  [a % c.ndim for a in axes]))
        bad += float(red[~ok].sum())
        tot += float(red.sum())
    if tot > 0 and bad > 1e-8 * tot:
        raise ValueError(
            f"field is not localized to the lambda={lam} block "
            f"(off-block mass fraction {bad / tot:.2e})")


def _timewise(fn, u, grid):
    """Apply a (field, xi0) slice operator across the time axis spectrally."""
    k0 = grid.axis_wavenumbers(0)
    uh = np.fft.fft(u, axis=1)
    out = np.empty_like(uh)
    for it in range(uh.shape[1]):
        out[:, it] = fn(uh[:, it], k0[it])
    return np.fft.ifft(out, axis=1)


def apply_maxwell_P(u: SpectralField, model, truncation=None) -> SpectralField:
    """Divergence-form application of the first-order operator.

    ``truncation``, if given, low-passes the coefficients at sqrt(λ) first
    (the frequency-truncated operator variant).
    """
    grid = u.grid
    if not grid.includes_time:
        raise ValueError("apply_maxwell_P expects a space-time field")
    sgrid = _spatial_subgrid(grid)
    lam = truncation if truncation is not None else 4.0
    ops = MaxwellOperators(model, sgrid, lam, truncate=truncation is not None)
    arr = np.stack(u.components).astype(complex)
    out = _timewise(lambda sl, k0: ops.apply_P(sl, k0), arr, grid)
    if all(np.isrealobj(c) for c in u.components):
        out = out.real
    return SpectralField(grid, tuple(out))


def apply_diagonalizer(which, u: SpectralField, model, lam) -> SpectralField:
    """Apply one of the three diagonalization factors on the λ block.

    which : 'M', 'D' or 'N'; coefficients are truncated at sqrt(λ)
    internally.  The input must be frequency-localized to the block.
    """
    grid = u.grid
    if not grid.includes_time:
        raise ValueError("apply_diagonalizer expects a space-time field")
    _check_block(u, lam)
    sgrid = _spatial_subgrid(grid)
    ops = MaxwellOperators(model, sgrid, lam, truncate=True)
    table = {
        "M": lambda sl, k0: ops.apply_M(sl),
        "D": lambda sl, k0: ops.apply_D(sl, k0),
        "N": lambda sl, k0: ops.apply_N(sl),
    }
    if which not in table:
        raise ValueError("which must be one of 'M', 'D', 'N'")
    arr = np.stack(u.components).astype(complex)
    out = _timewise(table[which], arr, grid)
    return SpectralField(grid, tuple(out))
