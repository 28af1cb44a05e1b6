"""Linearization of the evolution operator: finite-difference directional
derivatives, the analytic off-diagonal block, the flat-state symbol matrix,
and dispersion-rate scans."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridFunction, l2_inner, spectral_derivative
from .layers import LayerKind, layer_operator
from .rhs import compute_phi
from .state import InterfaceState, PhysicalParams


@dataclass(frozen=True)
class SymbolMatrix:
    """2x2 linearization matrix of one Fourier mode at the flat state."""

    mode: int
    matrix: np.ndarray  # shape (2, 2)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    def eigenpairs(self):
        vals, vecs = np.linalg.eig(self.matrix)
        vals, vecs = np.real(vals), np.real(vecs)  # spectrum is real for stable densities
        order = np.argsort(vals)  # most negative first
        return vals[order], vecs[:, order]


def flat_symbol_matrix(params: PhysicalParams, k: int, period: float = 2 * np.pi) -> SymbolMatrix:
    """M(k) = |kappa| * [[Theta1, Theta2 e^{-c kappa}], [Theta1 e^{-c kappa}, Theta2]]
    with kappa = 2 pi k / period the physical wavenumber.

    Diagonal: the half-Laplacian multiplier of the self-interaction term.
    Off-diagonal: the flat C/D kernel Fourier pairs, which attenuate a mode of
    the other interface by e^{-c kappa}.
    """
    kappa = abs(2 * np.pi * k / period)
    th1, th2 = params.theta1, params.theta2
    e = np.exp(-params.c_inf * kappa)
    m = kappa * np.array([[th1, th2 * e], [th1 * e, th2]])
    return SymbolMatrix(k, m)


def directional_derivative_fd(
    X: InterfaceState,
    direction: tuple[GridFunction, GridFunction],
    eps: float = 1e-5,
) -> tuple[GridFunction, GridFunction]:
    """Central finite difference (Phi(X + eps Y) - Phi(X - eps Y)) / (2 eps)."""
    u, v = direction
    Xp = X.perturbed(eps * u.values, eps * v.values)
    Xm = X.perturbed(-eps * u.values, -eps * v.values)
    Xp.require_admissible()
    Xm.require_admissible()
    p1p, p2p = compute_phi(Xp)
    p1m, p2m = compute_phi(Xm)
    g = X.grid
    return (
        GridFunction(g, (p1p.values - p1m.values) / (2 * eps)),
        GridFunction(g, (p2p.values - p2m.values) / (2 * eps)),
    )


def offdiag_derivative(X: InterfaceState, v: GridFunction) -> GridFunction:
    """Derivative of the first component with respect to the lower interface:

    (Theta2/pi) [ (c+f) f' (C1[v'] + 2 C_{0,2,1}[v h'])
                  - f' (C1[h v' + v h'] + 2 C_{0,2,1}[v h h'])
                  + D1[v'] + 2 D_{0,2,1}[v h'] ].
    """
    X.require_admissible()
    g = X.grid
    c = X.params.c_inf
    th2 = X.params.theta2
    f, h = X.f.values, X.h.values
    fp = spectral_derivative(X.f).values
    hp = spectral_derivative(X.h).values
    vp = spectral_derivative(v).values

    def C1(vals):
        return layer_operator(LayerKind.C, X, GridFunction(g, vals)).values

    def C021(vals):
        return layer_operator(LayerKind.C, X, GridFunction(g, vals), m=2, p=1).values

    def D1(vals):
        return layer_operator(LayerKind.D, X, GridFunction(g, vals)).values

    def D021(vals):
        return layer_operator(LayerKind.D, X, GridFunction(g, vals), m=2, p=1).values

    out = (th2 / np.pi) * (
        (c + f) * fp * (C1(vp) + 2 * C021(v.values * hp))
        - fp * (C1(h * vp + v.values * hp) + 2 * C021(v.values * h * hp))
        + D1(vp)
        + 2 * D021(v.values * hp)
    )
    return GridFunction(g, out)


@dataclass(frozen=True)
class DispersionRow:
    mode: int
    branch: int  # 0 = more negative eigenvalue, 1 = less negative
    predicted: float
    measured: float

    @property
    def relative_mismatch(self) -> float:
        if self.predicted == 0.0:
            return abs(self.measured)
        return abs(self.measured - self.predicted) / abs(self.predicted)


def dispersion_scan(
    params: PhysicalParams,
    modes,
    eps: float = 1e-6,
    n_points: int = 256,
    period: float = 2 * np.pi,
) -> list[DispersionRow]:
    """Instantaneous decay rates of eigenmode perturbations of the flat state.

    For each mode k and each eigenvector (a, b) of M(k), perturbs the flat
    state by eps*(a cos(kx), b cos(kx)) and measures <Phi, e> / <X - X_flat, e>.
    """
    grid = Grid(n_points, period)
    x = grid.nodes
    rows = []
    for k in modes:
        sym = flat_symbol_matrix(params, k, period)
        vals, vecs = sym.eigenpairs()
        for branch in (0, 1):
            a, b = vecs[0, branch], vecs[1, branch]
            profile = np.cos(k * 2 * np.pi / period * x)
            df = GridFunction(grid, eps * a * profile)
            dh = GridFunction(grid, eps * b * profile)
            X = InterfaceState(df, dh, params)
            phi1, phi2 = compute_phi(X)
            denom = l2_inner(df, df) + l2_inner(dh, dh)
            numer = l2_inner(phi1, df) + l2_inner(phi2, dh)
            measured = numer / denom if denom != 0 else 0.0
            rows.append(DispersionRow(int(k), branch, float(np.real(vals[branch])), measured))
    return rows
