"""Exact symbol-level diagonalization of the 2D anisotropic Maxwell operator.

For the first-order system with inverse permittivity entries (e11, e12, e22)
the principal symbol p(x, xi) is a 3x3 matrix in xi = (xi0, xi1, xi2).  With
the adjugate weight

    ||xi'||^2 = e22 xi1^2 - 2 e12 xi1 xi2 + e11 xi2^2,

p factors exactly as p = m . d . m^{-1} where

    d = i diag(xi0, xi0 - ||xi'||, xi0 + ||xi'||)

and the columns of m are the eigenvectors written in terms of the weighted
unit covector xi*_j = xi_j / ||xi'||.  All entries are homogeneous of degree
zero in xi' so arrays of any broadcastable shape are supported.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SymbolPack", "assemble_symbols", "weighted_norm"]


class SymbolPack:
    """Bundle of pointwise symbol matrices at a batch of (x, xi) samples.

    Attributes
    ----------
    p, d, m, m_inv : ndarray, shape (..., 3, 3)
        Principal symbol, diagonal factor, diagonalizer, its inverse.
    q : ndarray
        Scalar half-wave symbol xi0 - ||xi'||.
    weight : ndarray
        The anisotropic norm ||xi'|| itself.
    """

    def __init__(self, p, d, m, m_inv, q, weight):
        self.p, self.d, self.m, self.m_inv = p, d, m, m_inv
        self.q, self.weight = q, weight

    def residual(self):
        """Max-norm of p - m d m^{-1} over the batch (factorization check)."""
        return float(np.abs(self.p - self.m @ self.d @ self.m_inv).max())


def weighted_norm(e11, e12, e22, xi1, xi2):
    """||xi'|| in the adjugate metric: sqrt(e22 xi1^2 - 2 e12 xi1 xi2 + e11 xi2^2)."""
    return np.sqrt(e22 * xi1 * xi1 - 2.0 * e12 * xi1 * xi2 + e11 * xi2 * xi2)


def assemble_symbols(model, x, xi, truncation=None) -> SymbolPack:
    """Evaluate the symbol factorization at points x = (x1, x2), xi = (xi0, xi1, xi2).

    Parameters
    ----------
    model : Permittivity
        Coefficient model; ``truncation`` optionally low-passes it at that
        cutoff first (band-limited models only).
    x : pair of array_like
        Spatial sample coordinates.
    xi : triple of array_like
        Space-time covector samples; (xi1, xi2) must not vanish.
    """
    if truncation is not None:
        model = model.truncated(truncation)
    x1, x2 = (np.asarray(a, dtype=float) for a in x)
    xi0, xi1, xi2 = (np.asarray(a, dtype=float) for a in xi)
    e11, e12, e22 = (np.asarray(a, dtype=float)
                     for a in model.inv_entries(x1, x2))
    shape = np.broadcast(xi0, xi1, xi2, e11).shape
    xi0, xi1, xi2, e11, e12, e22 = (np.broadcast_to(a, shape)
                                    for a in (xi0, xi1, xi2, e11, e12, e22))
    wn = weighted_norm(e11, e12, e22, xi1, xi2)
    if np.any(wn == 0):
        raise ValueError("spatial frequency must be nonzero")
    xs1, xs2 = xi1 / wn, xi2 / wn

    zero = np.zeros(shape)
    one = np.ones(shape)

    def mat(rows):
        return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)

    p = 1j * mat([
        [xi0, zero, -xi2],
        [zero, xi0, xi1],
        [-xi2 * e11 + xi1 * e12, xi1 * e22 - xi2 * e12, xi0],
    ])
    d = 1j * mat([
        [xi0, zero, zero],
        [zero, xi0 - wn, zero],
        [zero, zero, xi0 + wn],
    ])
    m = mat([
        [-xs1 * e22 + xs2 * e12, xs2, -xs2],
        [xs1 * e12 - xs2 * e11, -xs1, xs1],
        [zero, one, one],
    ])
    m_inv = mat([
        [-xs1, -xs2, zero],
        [(xs2 * e11 - xs1 * e12) / 2, (-xs1 * e22 + xs2 * e12) / 2, one / 2],
        [(-xs2 * e11 + xs1 * e12) / 2, (xs1 * e22 - xs2 * e12) / 2, one / 2],
    ])
    return SymbolPack(p, d, m, m_inv, xi0 - wn, wn)
