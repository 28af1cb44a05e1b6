"""Uniform periodic grid, spectral derivatives, Hilbert multiplier, Sobolev norms.

The interface functions live on a uniform grid over [-P/2, P/2) with an even
power-of-two number of nodes.  All spectral operations go through numpy's FFT
and use the physical wavenumber 2*pi*k/P, which coincides with the integer
mode index when P = 2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with n_points nodes on a domain of length period."""

    n_points: int
    period: float

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError("n_points must be >= 16")
        if self.n_points & (self.n_points - 1) != 0:
            raise ValueError("n_points must be a power of two")
        if self.period <= 0:
            raise ValueError("period must be positive")

    @property
    def spacing(self) -> float:
        return self.period / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return -self.period / 2 + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Physical wavenumbers 2*pi*k/P in FFT ordering."""
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=1.0 / self.n_points) / self.period

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.n_points == other.n_points
            and self.period == other.period
        )

    def __hash__(self):
        return hash((self.n_points, self.period))


class GridFunction:
    """Real values sampled at the nodes of a periodic grid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ValueError(f"expected {grid.n_points} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("GridFunction values must be finite")
        self.grid = grid
        self.values = values

    @classmethod
    def from_callable(cls, grid: Grid, func) -> "GridFunction":
        return cls(grid, func(grid.nodes))

    @classmethod
    def zeros(cls, grid: Grid) -> "GridFunction":
        return cls(grid, np.zeros(grid.n_points))

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())

    def same_grid(self, other: "GridFunction") -> None:
        if self.grid != other.grid:
            raise ValueError("GridFunctions live on different grids")

    def mean(self) -> float:
        return float(np.mean(self.values))

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self.same_grid(other)
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self.same_grid(other)
            return GridFunction(self.grid, self.values - other.values)
        return GridFunction(self.grid, self.values - other)

    def __rsub__(self, other):
        return GridFunction(self.grid, other - self.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self.same_grid(other)
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def __repr__(self):
        return f"GridFunction(n={self.grid.n_points}, P={self.grid.period:g})"


@dataclass(frozen=True)
class SobolevIndex:
    """Regularity index r of the discrete H^r norm, restricted to [0, 2]."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 2.0:
            raise ValueError("Sobolev index must lie in [0, 2]")


def spectral_derivative(u: GridFunction) -> GridFunction:
    """Derivative of the trigonometric interpolant of u."""
    uhat = np.fft.fft(u.values)
    k = u.grid.wavenumbers
    # drop the (unpaired) Nyquist mode contribution of an odd derivative
    dhat = 1j * k * uhat
    dhat[u.grid.n_points // 2] = 0.0
    return GridFunction(u.grid, np.real(np.fft.ifft(dhat)))


def hilbert_multiplier(u: GridFunction) -> GridFunction:
    """Hilbert transform: mode e^{ikx} maps to -i*sign(k)*e^{ikx}, zero mode to 0."""
    uhat = np.fft.fft(u.values)
    k = u.grid.wavenumbers
    hhat = -1j * np.sign(k) * uhat
    return GridFunction(u.grid, np.real(np.fft.ifft(hhat)))


def half_laplacian(u: GridFunction) -> GridFunction:
    """(-d^2/dx^2)^{1/2}: multiplier |k|; equals H(d/dx) on mean-zero input."""
    uhat = np.fft.fft(u.values)
    k = u.grid.wavenumbers
    out = np.abs(k) * uhat
    out[u.grid.n_points // 2] = 0.0
    return GridFunction(u.grid, np.real(np.fft.ifft(out)))


def sobolev_norm(u: GridFunction, r: SobolevIndex | float) -> float:
    """Discrete H^r norm (sum_k (1+k^2)^r |u_k|^2)^{1/2}.

    Fourier coefficients are normalized so the r = 0 norm equals the continuum
    L2 norm of the trigonometric interpolant; k is the physical wavenumber.
    """
    if not isinstance(r, SobolevIndex):
        r = SobolevIndex(float(r))
    coeffs = np.fft.fft(u.values) / u.grid.n_points
    k = u.grid.wavenumbers
    weights = (1.0 + k * k) ** r.r
    return float(np.sqrt(u.grid.period * np.sum(weights * np.abs(coeffs) ** 2)))


def shift(u: GridFunction, j: int) -> GridFunction:
    """Cyclic shift by j nodes: output node i carries the value of node i - j."""
    return GridFunction(u.grid, np.roll(u.values, j))


def reflect(u: GridFunction) -> GridFunction:
    """Grid-compatible reflection (Ru)(x) = u(-x)."""
    return GridFunction(u.grid, np.roll(u.values[::-1], 1))


def sample_shifted(u: GridFunction, frac: float) -> np.ndarray:
    """Values of the trigonometric interpolant at x_j + frac*spacing."""
    n = u.grid.n_points
    uhat = np.fft.fft(u.values)
    k = np.fft.fftfreq(n, d=1.0 / n)
    phase = np.exp(2j * np.pi * k * frac / n)
    phase[n // 2] = np.cos(np.pi * frac)  # real symmetrization of the Nyquist mode
    return np.real(np.fft.ifft(uhat * phase))


def evaluate_interpolant(u: GridFunction, x) -> np.ndarray:
    """Evaluate the trigonometric interpolant of u at arbitrary points x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = u.grid.n_points
    coeffs = np.fft.fft(u.values) / n
    k = u.grid.wavenumbers
    # for real input the Nyquist coefficient is real, so Re(...) symmetrizes it
    phases = np.exp(1j * np.outer(x - u.grid.nodes[0], k))
    return np.real(phases @ coeffs)


def l2_inner(u: GridFunction, v: GridFunction) -> float:
    u.same_grid(v)
    return float(u.grid.spacing * np.dot(u.values, v.values))


def l2_norm(u: GridFunction) -> float:
    return float(np.sqrt(u.grid.spacing * np.dot(u.values, u.values)))


def high_mode_energy_fraction(u: GridFunction, cutoff_mode: int | None = None) -> float:
    """Fraction of spectral energy carried by modes above n_points/4 (default)."""
    n = u.grid.n_points
    if cutoff_mode is None:
        cutoff_mode = n // 4
    coeffs = np.fft.fft(u.values) / n
    modes = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    total = np.sum(np.abs(coeffs[1:]) ** 2) if n > 1 else 0.0
    if total == 0.0:
        return 0.0
    high = np.sum(np.abs(coeffs[modes > cutoff_mode]) ** 2)
    return float(high / total)
