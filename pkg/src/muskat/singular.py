"""Principal-value singular operators: the B family and the truncated Hilbert transform.

The quadrature places nodes half a spacing off the collocation point
(midpoint / alternating-point rule), which realizes the principal value by
symmetry and is spectrally accurate for periodic integrands with an odd 1/s
singularity.  Kernels are summed over periodic images in closed form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import GridFunction, sample_shifted, spectral_derivative


@dataclass(frozen=True)
class QuadratureScheme:
    """Node offset (as a fraction of the spacing) and image-summation depth.

    offset_fraction = 1/2 places the nodes symmetrically about the
    singularity, which is required for the principal-value interpretation.
    image_pairs bounds the symmetric kernel image sum used where no closed
    form applies (denominator arity >= 2 in apply_B, >= 3 in the layers).
    """

    offset_fraction: float = 0.5
    image_pairs: int = 1024

    def __post_init__(self):
        if not 0.0 < self.offset_fraction < 1.0:
            raise ValueError("offset_fraction must lie strictly inside (0, 1)")
        if self.image_pairs < 1:
            raise ValueError("image_pairs must be >= 1")


DEFAULT_SCHEME = QuadratureScheme()


def _difference_tables(funcs, shifted_index, offset):
    """delta_{[x_i, s_j]} u = u(x_i) - u(x_i - s_j) for each u, as (N, N) arrays."""
    return [u.values[:, None] - sample_shifted(u, -offset)[shifted_index] for u in funcs]


def apply_B(
    numerators: list[GridFunction],
    denominators: list[GridFunction],
    density: GridFunction,
    scheme: QuadratureScheme = DEFAULT_SCHEME,
) -> GridFunction:
    """B_{n,m}(v_1..v_m)[u_1..u_n, omega]: the PV integral (difference-quotient
    products over 1 + (delta v/s)^2 factors against omega(x-s)/s).

    For m <= 1 the kernel is folded over the common denominator s^2 + (delta v)^2
    and summed over images in closed form; m >= 2 uses truncated symmetric image
    summation and is test-grade only.
    """
    grid = density.grid
    for u in list(numerators) + list(denominators):
        density.same_grid(u)
    n = len(numerators)
    m = len(denominators)
    N = grid.n_points
    dx = grid.spacing
    P = grid.period
    o = scheme.offset_fraction

    s = (np.arange(N) + o) * dx  # quadrature offsets in (0, P)
    i_idx = np.arange(N)[:, None]
    j_idx = np.arange(N)[None, :]
    shifted_index = (i_idx - j_idx) % N

    om_shift = sample_shifted(density, -o)[shifted_index]
    integrand = om_shift
    for du in _difference_tables(numerators, shifted_index, o):
        integrand = integrand * du

    if m == 0:
        kern = kernels.cot_power_sum(s, n + 1, P)[None, :]
    elif m == 1:
        dv = _difference_tables(denominators, shifted_index, o)[0]
        kern = kernels.reciprocal_pole_kernel(s[None, :], dv, n, P)
    else:
        warnings.warn(
            "apply_B with m >= 2 uses truncated image summation (test-grade accuracy)",
            RuntimeWarning,
            stacklevel=2,
        )
        dvs = _difference_tables(denominators, shifted_index, o)
        kern = np.zeros((N, N))
        for j in range(-scheme.image_pairs, scheme.image_pairs + 1):
            t = s[None, :] + j * P
            term = t ** (2 * m - n - 1)
            for dv in dvs:
                term = term / (t * t + dv * dv)
            kern = kern + term

    return GridFunction(grid, dx * np.sum(kern * integrand, axis=1))


def apply_B0(
    u: GridFunction,
    n: int,
    m: int,
    density: GridFunction,
    scheme: QuadratureScheme = DEFAULT_SCHEME,
) -> GridFunction:
    """B^0_{n,m}(u)[omega]: all numerator and denominator arguments equal to u."""
    return apply_B([u] * n, [u] * m, density, scheme)


def apply_Bcal(
    u: GridFunction,
    density: GridFunction,
    scheme: QuadratureScheme = DEFAULT_SCHEME,
    u_prime: GridFunction | None = None,
) -> GridFunction:
    """The operator (1/pi)(B^0_{0,1}(u) + u' B^0_{1,1}(u)) applied to the density.

    Reduces to the Hilbert transform at u = 0.  The derivative u' may be passed
    in to share a precomputed spectral derivative.
    """
    if u_prime is None:
        u_prime = spectral_derivative(u)
    b01 = apply_B0(u, 0, 1, density, scheme)
    b11 = apply_B0(u, 1, 1, density, scheme)
    return GridFunction(u.grid, (b01.values + u_prime.values * b11.values) / np.pi)


def truncated_hilbert(
    delta: float,
    density: GridFunction,
    scheme: QuadratureScheme = DEFAULT_SCHEME,
) -> GridFunction:
    """(1/pi) * integral over |s| > delta of omega(x-s)/s ds with the periodized kernel.

    Since delta < P/2, only the fundamental image is truncated: the kernel is
    the full periodized 1/s sum minus the local 1/s on |s| < delta.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    grid = density.grid
    P = grid.period
    if delta >= P / 2:
        warnings.warn("delta >= P/2 leaves an empty integration range", RuntimeWarning, stacklevel=2)
        return GridFunction(grid, np.zeros(grid.n_points))
    N = grid.n_points
    dx = grid.spacing
    o = scheme.offset_fraction
    s = (np.arange(N) + o) * dx
    s_sym = np.where(s > P / 2, s - P, s)  # principal representative in (-P/2, P/2]
    kern = kernels.cot_power_sum(s_sym, 1, P)
    near = np.abs(s_sym) < delta * (1.0 - 1e-12)
    kern = kern - np.where(near, 1.0 / s_sym, 0.0)

    i_idx = np.arange(N)[:, None]
    j_idx = np.arange(N)[None, :]
    om_shift = sample_shifted(density, -o)[(i_idx - j_idx) % N]
    out = (dx / np.pi) * np.sum(kern[None, :] * om_shift, axis=1)
    return GridFunction(grid, out)
