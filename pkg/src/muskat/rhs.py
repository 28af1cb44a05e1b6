"""Evolution right-hand side Phi = (Phi_1, Phi_2) for the interface pair X = (f, h).

Each component couples a singular self-interaction term (through the operator
of singular.apply_Bcal) with non-singular cross-interaction layer potentials;
the coupling carries first derivatives of both unknowns.
"""

from __future__ import annotations

import numpy as np

from .grid import GridFunction, spectral_derivative
from .layers import LayerKind, layer_operator
from .singular import DEFAULT_SCHEME, QuadratureScheme, apply_Bcal
from .state import InterfaceState


def compute_phi(
    X: InterfaceState, scheme: QuadratureScheme = DEFAULT_SCHEME
) -> tuple[GridFunction, GridFunction]:
    """Phi_1 = Theta1*Bcal(f)[f'] + (Theta2/pi)*((c+f) f' C1[h'] - f' C1[h h'] + D1[h'])
    Phi_2 = Theta2*Bcal(h)[h'] + (Theta1/pi)*((h-c) h' C1'[f'] - h' C1'[f f'] + D1'[f'])

    Derivatives are spectral and shared across the five kernel sweeps.
    """
    X.require_admissible()
    g = X.grid
    c = X.params.c_inf
    th1 = X.params.theta1
    th2 = X.params.theta2
    f, h = X.f, X.h
    fp = spectral_derivative(f)
    hp = spectral_derivative(h)
    hhp = GridFunction(g, h.values * hp.values)
    ffp = GridFunction(g, f.values * fp.values)

    b_f = apply_Bcal(f, fp, scheme, u_prime=fp)
    c1_hp = layer_operator(LayerKind.C, X, hp, scheme=scheme)
    c1_hhp = layer_operator(LayerKind.C, X, hhp, scheme=scheme)
    d1_hp = layer_operator(LayerKind.D, X, hp, scheme=scheme)
    phi1 = th1 * b_f.values + (th2 / np.pi) * (
        (c + f.values) * fp.values * c1_hp.values
        - fp.values * c1_hhp.values
        + d1_hp.values
    )

    b_h = apply_Bcal(h, hp, scheme, u_prime=hp)
    c1p_fp = layer_operator(LayerKind.C_PRIME, X, fp, scheme=scheme)
    c1p_ffp = layer_operator(LayerKind.C_PRIME, X, ffp, scheme=scheme)
    d1p_fp = layer_operator(LayerKind.D_PRIME, X, fp, scheme=scheme)
    phi2 = th2 * b_h.values + (th1 / np.pi) * (
        (h.values - c) * hp.values * c1p_fp.values
        - hp.values * c1p_ffp.values
        + d1p_fp.values
    )

    return GridFunction(g, phi1), GridFunction(g, phi2)


def two_phase_reduction(
    X: InterfaceState, scheme: QuadratureScheme = DEFAULT_SCHEME
) -> GridFunction:
    """Theta2 = 0 degenerate case: the f equation decouples into the classical
    single-interface contour equation Theta1*Bcal(f)[f']."""
    if X.params.theta2 != 0.0:
        raise ValueError("two-phase reduction requires theta2 = 0 (rho2 = rho3)")
    fp = spectral_derivative(X.f)
    b_f = apply_Bcal(X.f, fp, scheme, u_prime=fp)
    return GridFunction(X.grid, X.params.theta1 * b_f.values)
