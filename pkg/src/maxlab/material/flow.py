"""Bicharacteristic flow of the half-wave Hamiltonian q = xi0 - ||xi'||.

The coefficients are time-independent, so x0 advances at unit speed and xi0
is conserved; the real dynamics live in (x', xi').  Integration is 4th-order
Runge-Kutta with a fixed step, which also makes time reversal exact up to
roundoff-level truncation error.
"""

from __future__ import annotations

import numpy as np

from .models import Permittivity
from .symbols import weighted_norm

__all__ = ["FlowResult", "hamilton_flow"]


class FlowResult:
    """Trajectory of a single bicharacteristic.

    Attributes
    ----------
    t : ndarray, shape (n,)
        Flow parameter values.
    x : ndarray, shape (n, 3)
        Positions (x0, x1, x2).
    xi : ndarray, shape (n, 3)
        Covectors (xi0, xi1, xi2).
    q : ndarray, shape (n,)
        Hamiltonian along the flow (conserved).
    exited : bool
        True if the spatial point left the coefficient box and the
        trajectory was truncated there.
    """

    def __init__(self, t, x, xi, q, exited):
        self.t, self.x, self.xi = t, x, xi
        self.q = q
        self.exited = bool(exited)

    def q_drift(self):
        return float(np.abs(self.q - self.q[0]).max())


def _rhs(model: Permittivity, x1, x2, xi1, xi2):
    """(dx'/dt, dxi'/dt) for q = xi0 - ||xi'||_{adj}."""
    e11, e12, e22 = (float(np.asarray(v)) for v in model.inv_entries(x1, x2))
    wn = weighted_norm(e11, e12, e22, xi1, xi2)
    if wn == 0:
        raise ValueError("flow hit xi' = 0")
    # dq/dxi' = -(adj form gradient)/(2 wn)
    dx1 = -(e22 * xi1 - e12 * xi2) / wn
    dx2 = -(e11 * xi2 - e12 * xi1) / wn
    (g11x, g12x, g22x), (g11y, g12y, g22y) = model.inv_entries_grad(x1, x2)
    quad_x = float(g22x) * xi1 * xi1 - 2 * float(g12x) * xi1 * xi2 + float(g11x) * xi2 * xi2
    quad_y = float(g22y) * xi1 * xi1 - 2 * float(g12y) * xi1 * xi2 + float(g11y) * xi2 * xi2
    dxi1 = quad_x / (2.0 * wn)
    dxi2 = quad_y / (2.0 * wn)
    return np.array([dx1, dx2]), np.array([dxi1, dxi2])


def hamilton_flow(model: Permittivity, x0, xi0, t_span, steps, box=None) -> FlowResult:
    """Integrate a bicharacteristic from (x0, xi0) over t_span with RK4.

    Parameters
    ----------
    model : Permittivity
        Coefficient model (must support gradient evaluation).
    x0, xi0 : array_like, shape (3,)
        Initial position (x0, x1, x2) and covector; xi0 spatial part nonzero.
    t_span : pair of float
        Flow parameter interval (negative direction allowed).
    steps : int
        Number of fixed RK4 steps.
    box : pair of float, optional
        Spatial box extents; trajectory is truncated with a flag once the
        point leaves [0, box) in either coordinate.  Defaults to the model
        extents; pass np.inf entries to disable (periodic models).
    """
    x0 = np.asarray(x0, dtype=float)
    xi_init = np.asarray(xi0, dtype=float)
    if x0.shape != (3,) or xi_init.shape != (3,):
        raise ValueError("x0 and xi0 must be 3-vectors")
    if np.hypot(xi_init[1], xi_init[2]) == 0:
        raise ValueError("spatial covector must be nonzero")
    if steps < 1:
        raise ValueError("steps must be positive")
    if box is None:
        box = model.extents
    t0, t1 = float(t_span[0]), float(t_span[1])
    h = (t1 - t0) / steps

    ts = [t0]
    xs = [x0.copy()]
    xis = [xi_init.copy()]
    exited = False
    y = np.concatenate([x0[1:], xi_init[1:]])

    def f(y):
        dx, dxi = _rhs(model, y[0], y[1], y[2], y[3])
        return np.concatenate([dx, dxi])

    for n in range(steps):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (n + 1) * h
        ts.append(t)
        xs.append(np.array([x0[0] + (t - t0), y[0], y[1]]))
        xis.append(np.array([xi_init[0], y[2], y[3]]))
        inside = all(not np.isfinite(box[a]) or 0.0 <= y[a] < box[a]
                     for a in (0, 1))
        if not inside:
            exited = True
            break

    ts = np.array(ts)
    xs = np.array(xs)
    xis = np.array(xis)
    e11, e12, e22 = np.array([model.inv_entries(p[1], p[2]) for p in xs]).T.reshape(3, -1)
    q = xis[:, 0] - weighted_norm(e11, e12, e22, xis[:, 1], xis[:, 2])
    return FlowResult(ts, xs, xis, q, exited)
