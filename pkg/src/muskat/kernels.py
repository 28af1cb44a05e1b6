"""Closed-form periodized kernels.

All layer and singular kernels reduce to image sums over j in Z of
1/((s+jP)^2 + d^2), (s+jP)/((s+jP)^2 + d^2) and pure powers (s+jP)^{-k}.
These follow from the cotangent identity sum_j 1/(z+j) = pi*cot(pi*z) applied
at z = (s -+ i d)/P and taking real/imaginary parts; the resulting constants
were re-derived here and are locked against brute-force image summation in the
test suite.
"""

from __future__ import annotations

import numpy as np

_D_SMALL = 1e-13  # below this |d| the Poisson sum reduces to the pure 1/t^2 sum


def poisson_kernel(s, d, period: float):
    """sum_j 1/((s+jP)^2 + d^2) = (pi/(P*d)) * sinh(2*pi*d/P) / (cosh(2*pi*d/P) - cos(2*pi*s/P)).

    Even in both s and d; for d -> 0 the limit sum_j (s+jP)^{-2} is used, which
    requires s != 0 (mod P).
    """
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    b = 2 * np.pi / period
    # q = e^{-b|d|} keeps the hyperbolic ratio finite for arbitrarily large |d|:
    # sinh(b d)/(cosh(b d) - cos(b s)) = sign(d) (1-q^2)/(1+q^2-2q cos(b s))
    q = np.exp(-b * np.abs(d))
    denom = 1.0 + q * q - 2.0 * q * np.cos(b * s)
    if np.any(denom <= 0):
        raise ValueError("poisson kernel is singular at (s, d) = (0, 0) mod P")
    small = np.abs(d) < _D_SMALL
    d_safe = np.where(small, 1.0, np.abs(d))
    regular = (np.pi / (period * d_safe)) * (1.0 - q * q) / denom
    limit = (2.0 * b * np.pi / period) * q / denom
    return np.where(small, limit, regular)


def flux_kernel(s, d, period: float):
    """Symmetrically paired sum_j (s+jP)/((s+jP)^2 + d^2) = (pi/P) * sin(2*pi*s/P) / (cosh - cos).

    Odd in s, even in d; at d = 0 this is the periodized PV kernel
    (pi/P)*cot(pi*s/P) of the Hilbert transform.
    """
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    b = 2 * np.pi / period
    # same overflow-safe rescaling as the Poisson kernel (q = e^{-b|d|})
    q = np.exp(-b * np.abs(d))
    denom = 1.0 + q * q - 2.0 * q * np.cos(b * s)
    if np.any(denom <= 0):
        raise ValueError("flux kernel is singular at (s, d) = (0, 0) mod P")
    return (2.0 * np.pi / period) * q * np.sin(b * s) / denom


def poisson_kernel_dder(s, d, period: float):
    """Analytic d-derivative of poisson_kernel; used for coincident double poles:

    sum_j 1/((s+jP)^2 + d^2)^2 = -poisson_kernel_dder(s, d, P) / (2*d).
    """
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    b = 2 * np.pi / period
    A = np.sinh(b * d)
    B = np.cosh(b * d) - np.cos(b * s)
    num = b * np.cosh(b * d) * d * B - A * B - b * d * A * A
    return (np.pi / period) * num / (d * d * B * B)


def flux_kernel_dder(s, d, period: float):
    """Analytic d-derivative of flux_kernel:

    sum_j (s+jP)/((s+jP)^2 + d^2)^2 = -flux_kernel_dder(s, d, P) / (2*d).
    """
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    b = 2 * np.pi / period
    B = np.cosh(b * d) - np.cos(b * s)
    return -(np.pi / period) * b * np.sin(b * s) * np.sinh(b * d) / (B * B)


def double_pole_poisson(s, d, period: float):
    """sum_j 1/((s+jP)^2 + d^2)^2, safe for small d via the pure-power limit."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 1e-7
    d_safe = np.where(small, 1.0, d)
    regular = -poisson_kernel_dder(s, d_safe, period) / (2 * d_safe)
    with np.errstate(divide="ignore", invalid="ignore"):
        limit = cot_power_sum(s, 4, period)
    return np.where(small, limit, regular)


def double_pole_flux(s, d, period: float):
    """sum_j (s+jP)/((s+jP)^2 + d^2)^2, safe for small d."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 1e-7
    d_safe = np.where(small, 1.0, d)
    regular = -flux_kernel_dder(s, d_safe, period) / (2 * d_safe)
    with np.errstate(divide="ignore", invalid="ignore"):
        limit = cot_power_sum(s, 3, period)
    return np.where(small, limit, regular)


def _cot_poly(k: int) -> np.ndarray:
    """Coefficients (ascending) of p_k with sum_j (s+jP)^{-k} = (pi/P)^k p_k(cot(pi*s/P)).

    p_1 = c and p_{k+1} = (1+c^2) p_k' / k, from d/ds cot(pi*s/P) = -(pi/P)(1+c^2).
    """
    p = np.array([0.0, 1.0])
    for kk in range(1, k):
        dp = np.polynomial.polynomial.polyder(p)
        p = np.polynomial.polynomial.polymul(np.array([1.0, 0.0, 1.0]), dp) / kk
    return p


def cot_power_sum(s, k: int, period: float):
    """sum_j (s+jP)^{-k} (symmetric pairing for k = 1) via cotangent derivatives."""
    if k < 1:
        raise ValueError("power must be >= 1")
    s = np.asarray(s, dtype=float)
    c = 1.0 / np.tan(np.pi * s / period)
    poly = _cot_poly(k)
    return (np.pi / period) ** k * np.polynomial.polynomial.polyval(c, poly)


def reciprocal_pole_kernel(s, d, n: int, period: float):
    """sum_j (s+jP)^{1-n} / ((s+jP)^2 + d^2) for n >= 0.

    n = 0 and n = 1 are the flux and Poisson closed forms; higher n uses the
    recursion R_k = (S_k - R_{k-2})/d^2 with S_k = cot_power_sum, falling back
    to the d = 0 limit S_{n+1} where d is negligible.
    """
    if n == 0:
        return flux_kernel(s, d, period)
    if n == 1:
        return poisson_kernel(s, d, period)
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 1e-6
    d_safe = np.where(small, 1.0, d)
    r_prev2 = flux_kernel(s, d_safe, period)  # R_{-1}
    r_prev1 = poisson_kernel(s, d_safe, period)  # R_0
    for k in range(1, n):
        r_new = (cot_power_sum(s, k, period) - r_prev2) / (d_safe * d_safe)
        r_prev2, r_prev1 = r_prev1, r_new
    with np.errstate(divide="ignore", invalid="ignore"):
        limit = cot_power_sum(s, n + 1, period)
    return np.where(small, limit, r_prev1)
