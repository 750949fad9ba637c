"""Grid quantization a(x, D) of rough symbols by ξ-Fourier series.

The symbol is split as a(x, ξ) = ā(ξ) + r(x, ξ) where ā is the x-average.
The mean part is applied exactly as a Fourier multiplier.  The variation r
is expanded in ξ-modes over the period box [-π, π)^2 after rescaling
ξ -> ξ/λ, and each retained mode k acts as

    f  ->  r_k(x) · F^{-1}[ e^{i k·ξ/λ} F f ],

i.e. pointwise multiplication composed with a modulation.  The series tail
is estimated from the shell decay of the coefficients and the call fails if
the requested tolerance is out of reach at the mode budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..spectral.grid import SpectralField

__all__ = ["RoughSymbol", "QuantizeError", "quantize", "quantize_info"]


class QuantizeError(ValueError):
    """Raised when the ξ-series cannot meet the requested tolerance."""

    def __init__(self, message, achieved_tail=None):
        super().__init__(message)
        self.achieved_tail = achieved_tail


@dataclass
class RoughSymbol:
    """Scalar symbol a(x, ξ) with compact ξ-support.

    Parameters
    ----------
    evaluator : callable
        Vectorized ``a(x1, x2, xi1, xi2)`` returning complex values.
    xi_support_radius : float
        a(x, ξ) = 0 for |ξ| > radius · λ_scale.
    smoothness : float
        Spatial regularity tag (bookkeeping only).
    """

    evaluator: Callable
    xi_support_radius: float = 2.0
    smoothness: float = np.inf

    def __post_init__(self):
        if not (0 < self.xi_support_radius <= np.pi):
            raise ValueError("xi support radius must lie in (0, pi]")


def quantize(a: RoughSymbol, f: SpectralField, lam_scale,
             mode_budget=33, tol=1e-10) -> SpectralField:
    out, _ = quantize_info(a, f, lam_scale, mode_budget, tol)
    return out


def quantize_info(a: RoughSymbol, f: SpectralField, lam_scale,
                  mode_budget=33, tol=1e-10):
    """Apply a(x, D) and return (field, diagnostics).

    Diagnostics: kept mode count, estimated relative tail, and the operator
    bound constant sup|ā| + Σ_k sup_x |r_k| (an honest L²->L² upper bound).
    """
    grid = f.grid
    if grid.includes_time or len(grid.points) != 2:
        raise ValueError("quantize expects a 2D spatial grid")
    lam = float(lam_scale)
    if lam <= 0:
        raise ValueError("lam_scale must be positive")
    M = int(mode_budget)
    if M % 2 == 0:
        M += 1
    kmax = (M - 1) // 2

    K1, K2 = grid.wavenumber_mesh()
    # band-limitation precondition
    fh = [np.fft.fft2(c) for c in f.components]
    support = np.hypot(K1, K2) <= lam * a.xi_support_radius * (1 + 1e-12)
    out_mass = sum(float(np.abs(c[~support]).sum()) for c in fh)
    tot_mass = sum(float(np.abs(c).sum()) for c in fh)
    if tot_mass > 0 and out_mass > 1e-8 * tot_mass:
        raise ValueError("input field is not band-limited within the symbol support")

    X, Y = grid.coord_mesh()
    N1, N2 = grid.points

    # η sample points on the period box, wrapped to [-π, π)
    eta = 2 * np.pi * np.arange(M) / M
    eta = (eta + np.pi) % (2 * np.pi) - np.pi
    E1, E2 = np.meshgrid(eta, eta, indexing="ij")

    if N1 * N2 * M * M * 16 > 2e9:
        raise MemoryError("grid x mode budget too large; reduce one of them")

    # pass 1: x-mean of the symbol on the η lattice, chunked over rows
    mean_eta = np.zeros((M, M), dtype=complex)
    chunk = max(1, int(2e8 / (N2 * M * M * 16)))
    for i0 in range(0, N1, chunk):
        xs = X[i0:i0 + chunk, :, None, None]
        ys = Y[i0:i0 + chunk, :, None, None]
        vals = np.asarray(a.evaluator(xs, ys, lam * E1, lam * E2), dtype=complex)
        vals = np.broadcast_to(vals, (xs.shape[0], N2, M, M))
        mean_eta += vals.sum(axis=(0, 1))
    mean_eta /= N1 * N2

    # pass 2: ξ-series coefficients of the variation part
    coeffs = np.empty((N1, N2, M, M), dtype=complex)
    for i0 in range(0, N1, chunk):
        xs = X[i0:i0 + chunk, :, None, None]
        ys = Y[i0:i0 + chunk, :, None, None]
        vals = np.asarray(a.evaluator(xs, ys, lam * E1, lam * E2), dtype=complex)
        vals = np.broadcast_to(vals, (xs.shape[0], N2, M, M)) - mean_eta
        coeffs[i0:i0 + chunk] = np.fft.fft2(vals, axes=(-2, -1)) / (M * M)

    sup = np.abs(coeffs).max(axis=(0, 1))
    kk = np.fft.fftfreq(M, 1.0 / M).astype(int)
    KK1, KK2 = np.meshgrid(kk, kk, indexing="ij")
    shell_of = np.maximum(np.abs(KK1), np.abs(KK2))
    scale = max(float(np.abs(mean_eta).max()), float(sup.sum()), 1e-300)

    tail_rel = 0.0
    shells = np.array([sup[shell_of == r].sum() for r in range(1, kmax + 1)])
    if shells.sum() > 1e-13 * scale:
        nz = np.nonzero(shells > 1e-13 * scale)[0]
        if len(nz) and nz[-1] >= kmax - 2:
            # decay exponent from the outer half of the populated shells
            top = nz[len(nz) // 2:]
            r = top + 1.0
            p = -np.polyfit(np.log(r), np.log(shells[top]), 1)[0]
            if p <= 1.05:
                raise QuantizeError(
                    f"symbol xi-series is not decaying (fitted exponent {p:.2f})")
            tail_rel = shells[nz[-1]] * (nz[-1] + 1) / (p - 1) / scale
            if tail_rel > tol:
                raise QuantizeError(
                    f"xi-series tail {tail_rel:.2e} exceeds tolerance {tol:.1e} "
                    f"at mode budget {M}^2", achieved_tail=tail_rel)

    keep = sup > tol * scale / (M * M)
    keep_idx = np.argwhere(keep)

    # mean part: exact multiplier at the grid frequencies
    eta1g = K1 / lam
    eta2g = K2 / lam
    in_box = (np.abs(eta1g) <= np.pi) & (np.abs(eta2g) <= np.pi)
    mean_mult = np.zeros(grid.points, dtype=complex)
    if tot_mass > 0:
        # evaluate ā only where the input has support
        be1 = np.where(in_box, eta1g, 0.0)
        be2 = np.where(in_box, eta2g, 0.0)
        vals = np.zeros(grid.points, dtype=complex)
        chunk_m = max(1, int(2e8 / (N2 * N1 * N2 * 16)))
        for i0 in range(0, N1, chunk_m):
            xs = X[i0:i0 + chunk_m][..., None, None]
            ys = Y[i0:i0 + chunk_m][..., None, None]
            v = np.asarray(a.evaluator(xs, ys, lam * be1, lam * be2),
                           dtype=complex)
            vals += np.broadcast_to(v, (xs.shape[0], N2, N1, N2)).sum(axis=(0, 1))
        mean_mult = np.where(in_box, vals / (N1 * N2), 0.0)

    comps = np.stack(f.components)
    out = np.zeros_like(comps, dtype=complex)
    for ci in range(comps.shape[0]):
        ch = np.fft.fft2(comps[ci])
        acc = np.fft.ifft2(mean_mult * ch)
        for (i, j) in keep_idx:
            mod = np.exp(1j * (kk[i] * K1 + kk[j] * K2) / lam)
            acc += coeffs[:, :, i, j] * np.fft.ifft2(mod * ch)
        out[ci] = acc

    result = SpectralField(grid, tuple(out))
    info = {
        "kept_modes": int(keep.sum()),
        "tail_rel": float(tail_rel),
        "bound_constant": float(np.abs(mean_mult).max()
                                + np.abs(coeffs).max(axis=(0, 1)).sum()),
    }
    return result, info
