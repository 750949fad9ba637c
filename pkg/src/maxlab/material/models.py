"""Permittivity models.

Every model exposes the entries of the *inverse* permittivity matrix
eps^{-1}(x) = [[e11, e12], [e12, e22]] as the primitive object; the matrix
eps and the adjugate field eps~ = adj(eps^{-1}) are derived pointwise.  For
2x2 symmetric matrices the adjugate is linear in the entries,

    adj([[a, b], [b, c]]) = [[c, -b], [-b, a]],

so frequency truncation commutes with taking the adjugate; truncated models
reuse the same code path.
"""

from __future__ import annotations

import json

import numpy as np

from ..spectral.grid import GridSpec
from ..spectral.lp import chi_profile

__all__ = [
    "Permittivity", "ConstantPermittivity", "SyntheticCsPermittivity",
    "KerrPermittivity", "CounterexamplePermittivity", "EllipticityReport",
    "eval_permittivity", "ellipticity_probe", "truncate_coefficient",
    "model_from_json", "model_to_json",
]


def _derive(e11, e12, e22):
    """From eps^{-1} entries to the full (eps_inv, eps, eps_tilde) triple."""
    det = e11 * e22 - e12 * e12
    inv = np.stack([np.stack([e11, e12], -1), np.stack([e12, e22], -1)], -2)
    eps = np.stack([np.stack([e22 / det, -e12 / det], -1),
                    np.stack([-e12 / det, e11 / det], -1)], -2)
    til = np.stack([np.stack([e22, -e12], -1), np.stack([-e12, e11], -1)], -2)
    return inv, eps, til


class Permittivity:
    """Base class; subclasses implement ``inv_entries``."""

    is_state_dependent = False
    extents = (2 * np.pi, 2 * np.pi)

    def inv_entries(self, x, y):
        raise NotImplementedError

    def inv_entries_grad(self, x, y):
        """d/dx and d/dy of each inverse entry: ((e11x, e12x, e22x), (e11y, ...))."""
        raise NotImplementedError

    def inv_entries_grid(self, grid: GridSpec):
        xs = grid.axis_coords(grid.spatial_axes()[0])
        ys = grid.axis_coords(grid.spatial_axes()[1])
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return self.inv_entries(X, Y)

    def triple(self, x, y):
        return _derive(*(np.asarray(e, dtype=float) for e in self.inv_entries(x, y)))

    def truncated(self, nu):
        """Smooth low-pass of the coefficient field at |k| = nu."""
        return self  # band-limited models override

    def params(self):
        return {}


class ConstantPermittivity(Permittivity):
    """Constant SPD matrix; the constructor argument is eps itself."""

    def __init__(self, eps=((1.0, 0.0), (0.0, 1.0))):
        eps = np.asarray(eps, dtype=float)
        if eps.shape != (2, 2) or abs(eps[0, 1] - eps[1, 0]) > 1e-14:
            raise ValueError("eps must be 2x2 symmetric")
        w = np.linalg.eigvalsh(eps)
        if w[0] <= 0:
            raise ValueError("eps must be positive definite")
        self.eps = eps
        d = np.linalg.det(eps)
        self._inv = np.array([[eps[1, 1], -eps[0, 1]], [-eps[0, 1], eps[0, 0]]]) / d

    def inv_entries(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        one = np.ones(shape)
        return self._inv[0, 0] * one, self._inv[0, 1] * one, self._inv[1, 1] * one

    def inv_entries_grad(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        z = np.zeros(shape)
        return (z, z, z), (z, z, z)

    def params(self):
        return {"eps": self.eps.tolist()}


class SyntheticCsPermittivity(Permittivity):
    """Random C^s coefficient field built from dyadic frequency shells.

    eps^{-1}(x) = I + amplitude * sum_j 2^{-j s} w_j(x) applied to the three
    symmetric entries, where w_j is a seeded random real trigonometric
    polynomial supported on the shell |k| in (2^{j-1}, 2^j], normalized to
    sup-norm 1.  The truncation tail then scales like nu^{-s}, the natural
    C^s rate.

    Parameters
    ----------
    s : float
        Hoelder regularity index.
    seed : int
        Seed for the coefficient draw.
    amplitude : float
        Total sup-norm budget of the perturbation per entry.  The default
        0.1 keeps the ellipticity constant above 0.5 with a wide margin.
    """

    def __init__(self, s, seed=0, amplitude=0.1, extents=(2 * np.pi, 2 * np.pi),
                 max_shell=5, cutoff=None):
        self.s = float(s)
        self.seed = int(seed)
        self.amplitude = float(amplitude)
        self.extents = tuple(float(L) for L in extents)
        self.max_shell = int(max_shell)
        self.cutoff = cutoff
        self._build()

    def _build(self):
        L = self.extents
        kmax = 2 ** self.max_shell
        M = 2 * kmax  # mode lattice per axis, fftfreq layout
        k1 = 2 * np.pi / L[0] * np.fft.fftfreq(M, 1.0 / M)
        k2 = 2 * np.pi / L[1] * np.fft.fftfreq(M, 1.0 / M)
        K1, K2 = np.meshgrid(k1, k2, indexing="ij")
        KR = np.hypot(K1, K2)
        base = 2 * np.pi / min(L)
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, 0x5EED]))
        coeffs = np.zeros((3, M, M), dtype=complex)
        weights = [2.0 ** (-j * self.s) for j in range(1, self.max_shell + 1)]
        wsum = sum(weights)
        for comp in range(3):
            for j in range(1, self.max_shell + 1):
                shell = (KR > base * 2 ** (j - 1)) & (KR <= base * 2 ** j)
                c = np.zeros((M, M), dtype=complex)
                c[shell] = rng.standard_normal(shell.sum()) \
                    + 1j * rng.standard_normal(shell.sum())
                # Hermitian symmetrization for a real field.
                c = 0.5 * (c + np.conj(c[(-np.arange(M)) % M][:, (-np.arange(M)) % M]))
                w = np.fft.ifft2(c).real * M * M
                sup = np.abs(w).max()
                if sup > 0:
                    c *= weights[j - 1] / (wsum * sup)
                coeffs[comp] += c
        if self.cutoff is not None:
            coeffs *= chi_profile(KR / self.cutoff)[None]
        self._coeffs = coeffs * self.amplitude
        self._K1, self._K2 = K1, K2
        self._modes = np.abs(self._coeffs).sum(axis=0) > 0

    def _eval_modes(self, x, y, coeff):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast(x, y).shape
        xf = np.broadcast_to(x, shape).ravel()
        yf = np.broadcast_to(y, shape).ravel()
        sel = self._modes
        k1, k2, c = self._K1[sel], self._K2[sel], coeff[sel]
        phase = np.exp(1j * (np.outer(xf, k1) + np.outer(yf, k2)))
        return (phase @ c).real.reshape(shape)

    def inv_entries(self, x, y):
        one = np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)
        e11 = one + self._eval_modes(x, y, self._coeffs[0])
        e12 = self._eval_modes(x, y, self._coeffs[1])
        e22 = one + self._eval_modes(x, y, self._coeffs[2])
        return e11, e12, e22

    def inv_entries_grad(self, x, y):
        gx, gy = [], []
        for comp in range(3):
            gx.append(self._eval_modes(x, y, 1j * self._K1 * self._coeffs[comp]))
            gy.append(self._eval_modes(x, y, 1j * self._K2 * self._coeffs[comp]))
        return tuple(gx), tuple(gy)

    def inv_entries_grid(self, grid: GridSpec):
        """Fast grid evaluation by zero-padded inverse FFT (exact mode placement)."""
        ax = grid.spatial_axes()
        N1, N2 = grid.points[ax[0]], grid.points[ax[1]]
        if (abs(grid.extents[ax[0]] - self.extents[0]) > 1e-12
                or abs(grid.extents[ax[1]] - self.extents[1]) > 1e-12):
            return super().inv_entries_grid(grid)
        M = self._coeffs.shape[1]
        if N1 < M or N2 < M:
            return super().inv_entries_grid(grid)
        idx1 = np.fft.fftfreq(M, 1.0 / M).astype(int)
        out = []
        for comp in range(3):
            big = np.zeros((N1, N2), dtype=complex)
            big[np.ix_(idx1 % N1, idx1 % N2)] = self._coeffs[comp]
            out.append(np.fft.ifft2(big).real * N1 * N2)
        base = [1.0, 0.0, 1.0]
        return tuple(base[i] + out[i] for i in range(3))

    def truncated(self, nu):
        return SyntheticCsPermittivity(self.s, self.seed, self.amplitude,
                                       self.extents, self.max_shell, cutoff=nu)

    def params(self):
        return {"s": self.s, "seed": self.seed, "amplitude": self.amplitude,
                "extents": list(self.extents), "max_shell": self.max_shell,
                "cutoff": self.cutoff}


class KerrPermittivity(Permittivity):
    """State-dependent scalar law eps^{-1}(u) = psi(|u1|^2 + |u2|^2) * I."""

    is_state_dependent = True

    def __init__(self, psi=None, dpsi=None):
        if psi is None:
            psi, dpsi = (lambda r: 1.0 + r), (lambda r: np.ones_like(np.asarray(r, float)))
        if dpsi is None:
            raise ValueError("custom psi requires its derivative dpsi")
        self.psi, self.dpsi = psi, dpsi

    def inv_entries_state(self, u1, u2):
        r = np.asarray(u1) ** 2 + np.asarray(u2) ** 2
        val = self.psi(r)
        zero = np.zeros_like(val)
        return val, zero, val

    def inv_entries(self, x, y):
        raise ValueError("Kerr model requires a state argument")

    def params(self):
        return {"psi": "1+r"}


class CounterexamplePermittivity(Permittivity):
    """Anisotropic y-dependent law eps^{-1} = diag(1, g(y)).

    variant 'pure'   : g(y) = 1 + lam^{2 sigma} y^2,
    variant 'gtilde' : g(y) = 1 + lam^{2 sigma - 2 delta} a(lam^delta |y|)
    with a(r) = r^2 on [0,1], supported in [0,2) (C^s-bounded family).
    """

    def __init__(self, lam, s, variant="gtilde", extents=(2.0, 2.0)):
        if lam < 2:
            raise ValueError("lam must be >= 2")
        if not 1.0 <= s <= 2.0:
            raise ValueError("s must be in [1,2]")
        self.lam, self.s, self.variant = float(lam), float(s), variant
        self.sigma = (2.0 - s) / (2.0 + s)
        self.delta = 2.0 / (2.0 + s)
        self.extents = tuple(float(L) for L in extents)

    def g(self, y):
        y = np.asarray(y, dtype=float)
        if self.variant == "pure":
            return 1.0 + self.lam ** (2 * self.sigma) * y * y
        amp = self.lam ** (2 * self.sigma - 2 * self.delta)
        return 1.0 + amp * _a_profile(self.lam ** self.delta * np.abs(y))

    def dg(self, y):
        y = np.asarray(y, dtype=float)
        if self.variant == "pure":
            return 2.0 * self.lam ** (2 * self.sigma) * y
        amp = self.lam ** (2 * self.sigma - 2 * self.delta)
        r = self.lam ** self.delta * np.abs(y)
        return amp * _a_profile_d(r) * self.lam ** self.delta * np.sign(y)

    def inv_entries(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        one = np.ones(shape)
        return one, np.zeros(shape), self.g(y) * one

    def inv_entries_grad(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        z = np.zeros(shape)
        return (z, z, z), (z, z, self.dg(y) * np.ones(shape))

    def params(self):
        return {"lam": self.lam, "s": self.s, "variant": self.variant}


def _a_profile(r):
    """a(r): r^2 on [0,1], smoothly capped to 0 support in [0,2)."""
    r = np.asarray(r, dtype=float)
    return np.where(r <= 1.0, r * r, chi_profile(r))


def _a_profile_d(r):
    r = np.asarray(r, dtype=float)
    eps = 1e-6
    return np.where(r <= 1.0, 2.0 * r,
                    (chi_profile(r + eps) - chi_profile(r - eps)) / (2 * eps))


class EllipticityReport:
    def __init__(self, lam1, lam2, argmin, argmax, samples):
        if not (0 < lam1 <= lam2):
            raise ValueError(f"ellipticity violated: Lambda1={lam1} at {argmin}")
        self.lam1, self.lam2 = float(lam1), float(lam2)
        self.argmin, self.argmax = argmin, argmax
        self.samples = int(samples)

    def as_dict(self):
        return {"Lambda1": self.lam1, "Lambda2": self.lam2,
                "argmin": list(self.argmin), "argmax": list(self.argmax),
                "samples": self.samples}


def eval_permittivity(model: Permittivity, point, state=None):
    """(eps_inv, eps, eps_tilde) at a spatial point (or arrays of points)."""
    if model.is_state_dependent:
        if state is None:
            raise ValueError("Kerr model requires a state argument")
        u1, u2 = state[0], state[1]
        e11, e12, e22 = model.inv_entries_state(u1, u2)
        return _derive(np.asarray(e11, float), np.asarray(e12, float),
                       np.asarray(e22, float))
    x, y = point[-2], point[-1]
    return model.triple(x, y)


def ellipticity_probe(model: Permittivity, sample_count=10000, seed=0,
                      state=None) -> EllipticityReport:
    """Min/max Rayleigh quotient of eps over random (x, unit xi') samples."""
    if sample_count < 1000:
        raise ValueError("sample_count must be >= 1000")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xE11]))
    L = model.extents
    xs = rng.uniform(0, L[0], sample_count)
    ys = rng.uniform(0, L[1], sample_count)
    th = rng.uniform(0, 2 * np.pi, sample_count)
    if model.is_state_dependent:
        if state is None:
            state = (np.zeros(sample_count), np.zeros(sample_count))
        _, eps, _ = eval_permittivity(model, None, state=state)
    else:
        _, eps, _ = model.triple(xs, ys)
    c, s_ = np.cos(th), np.sin(th)
    quad = (eps[..., 0, 0] * c * c + 2 * eps[..., 0, 1] * c * s_
            + eps[..., 1, 1] * s_ * s_)
    imin, imax = int(np.argmin(quad)), int(np.argmax(quad))
    return EllipticityReport(quad[imin], quad[imax],
                             (xs[imin], ys[imin]), (xs[imax], ys[imax]),
                             sample_count)


def truncate_coefficient(model: Permittivity, nu, grid: GridSpec = None):
    """Low-pass the coefficient field at |k| = nu (chi roll-off).

    Returns (truncated entries on the grid, report dict).  Errors out if the
    post-truncation ellipticity constant fell below half the original.
    """
    if grid is None:
        n = int(max(64, 4 * 2 ** int(np.ceil(np.log2(max(nu, 8))))))
        n = min(n, 1024)
        grid = GridSpec(model.extents, (n, n))
    nyq = grid.spatial_nyquist()
    if nu > nyq:
        raise ValueError(f"cutoff {nu} above Nyquist {nyq}")
    e = model.inv_entries_grid(grid)
    ks = [grid.axis_wavenumbers(a) for a in grid.spatial_axes()]
    K1, K2 = np.meshgrid(ks[0], ks[1], indexing="ij")
    damp = chi_profile(np.hypot(K1, K2) / nu)
    out = []
    for comp in e:
        hat = np.fft.fft2(comp) * damp
        out.append(np.fft.ifft2(hat).real)
    lam1_pre = _grid_lambda1(e)
    lam1_post = _grid_lambda1(out)
    if lam1_post < 0.5 * lam1_pre:
        raise ValueError(
            f"truncation at nu={nu} broke ellipticity: Lambda1 {lam1_pre} -> "
            f"{lam1_post}; use a larger lambda")
    report = {"nu": float(nu), "Lambda1_pre": lam1_pre, "Lambda1_post": lam1_post,
              "sup_error": float(max(np.abs(a - b).max() for a, b in zip(e, out)))}
    return tuple(out), report


def _grid_lambda1(entries):
    e11, e12, e22 = entries
    # smallest eigenvalue of eps = inv(eps^{-1}) over the grid
    det = e11 * e22 - e12 * e12
    tr = e11 + e22
    disc = np.sqrt(np.maximum((e11 - e22) ** 2 + 4 * e12 ** 2, 0.0))
    lam_max_inv = (tr + disc) / 2.0
    return float((det / lam_max_inv).min()) if np.all(det > 0) else -1.0


_MODELS = {
    "constant": ConstantPermittivity,
    "synthetic_cs": SyntheticCsPermittivity,
    "kerr": KerrPermittivity,
    "counterexample": CounterexamplePermittivity,
}


def model_to_json(model: Permittivity) -> str:
    name = {v: k for k, v in _MODELS.items()}[type(model)]
    return json.dumps({"model": name, "params": model.params()})


def model_from_json(doc):
    if isinstance(doc, str):
        doc = json.loads(doc)
    name, params = doc["model"], dict(doc.get("params", {}))
    if name == "kerr":
        return KerrPermittivity()
    if name == "synthetic_cs":
        if params.get("cutoff") is None:
            params.pop("cutoff", None)
        if "extents" in params:
            params["extents"] = tuple(params["extents"])
        return SyntheticCsPermittivity(**params)
    if name == "constant":
        return ConstantPermittivity(params.get("eps", ((1, 0), (0, 1))))
    if name == "counterexample":
        return CounterexamplePermittivity(**params)
    raise ValueError(f"unknown model {name}")
