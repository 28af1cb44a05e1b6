"""Bulk velocity reconstruction, one-sided interface traces, pressures, and
field probes (divergence/curl residuals, Hölder quotients).

The velocity at a point off the interfaces is a pair of contour integrals over
the two interface curves.  Image by image the integrand reduces to the
Poisson/flux kernel shapes, so the periodized quadrature reuses the closed-form
kernels with d = y - (interface height at the integration node).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import GridFunction, evaluate_interpolant, spectral_derivative
from .layers import LayerKind, layer_operator
from .singular import DEFAULT_SCHEME, QuadratureScheme, apply_B
from .state import InterfaceState

TOO_CLOSE_FACTOR = 0.1  # exclusion zone around each interface, in grid spacings


@dataclass(frozen=True)
class FieldPoint:
    x: float
    y: float
    region: str  # above_f | between | below_h | on_interface


@dataclass(frozen=True)
class VelocitySample:
    v1: float
    v2: float
    p: float | None = None


@dataclass(frozen=True)
class HolderProbeSpec:
    """Hölder-quotient sampling plan near one interface side."""

    alpha: float
    pairs: int = 64
    region: str = "above"  # above | below (relative to the upper interface)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.region not in ("above", "below"):
            raise ValueError("region must be 'above' or 'below'")


def classify_point(X: InterfaceState, x: float, y: float, tol: float = 1e-12) -> FieldPoint:
    """Tag a point by the region of the three-layer geometry it falls in."""
    f_at = float(evaluate_interpolant(X.f, x)[0]) + X.params.c_inf
    h_at = float(evaluate_interpolant(X.h, x)[0])
    if abs(y - f_at) <= tol or abs(y - h_at) <= tol:
        region = "on_interface"
    elif y > f_at:
        region = "above_f"
    elif y < h_at:
        region = "below_h"
    else:
        region = "between"
    return FieldPoint(x, y, region)


def _interface_clearance(X: InterfaceState, x, y) -> np.ndarray:
    """Vertical distance from (x, y) to the nearer interface curve."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    upper = X.params.c_inf + evaluate_interpolant(X.f, x)
    lower = evaluate_interpolant(X.h, x)
    return np.minimum(np.abs(y - upper), np.abs(y - lower))


def velocity_values(X: InterfaceState, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bulk velocity (no proximity guard); x, y are broadcastable arrays."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    g = X.grid
    P = g.period
    dx = g.spacing
    s = g.nodes
    th1 = X.params.theta1 / np.pi
    th2 = X.params.theta2 / np.pi

    fp = spectral_derivative(X.f).values
    hp = spectral_derivative(X.h).values
    d_f = y[:, None] - X.params.c_inf - X.f.values[None, :]
    d_h = y[:, None] - X.h.values[None, :]
    ds = x[:, None] - s[None, :]

    pois_f = kernels.poisson_kernel(ds, d_f, P)
    pois_h = kernels.poisson_kernel(ds, d_h, P)
    flux_f = kernels.flux_kernel(ds, d_f, P)
    flux_h = kernels.flux_kernel(ds, d_h, P)

    v1 = dx * (
        th1 * np.sum(-d_f * pois_f * fp[None, :], axis=1)
        + th2 * np.sum(-d_h * pois_h * hp[None, :], axis=1)
    )
    v2 = dx * (
        th1 * np.sum(flux_f * fp[None, :], axis=1)
        + th2 * np.sum(flux_h * hp[None, :], axis=1)
    )
    return v1, v2


def velocity_at(X: InterfaceState, z: FieldPoint) -> VelocitySample:
    """Bulk velocity at a single point strictly off both interfaces."""
    clearance = float(_interface_clearance(X, z.x, z.y)[0])
    if clearance < TOO_CLOSE_FACTOR * X.grid.spacing:
        raise ValueError(
            f"point ({z.x:.4f}, {z.y:.4f}) is within {TOO_CLOSE_FACTOR} grid spacings "
            "of an interface; use velocity_trace for boundary values"
        )
    v1, v2 = velocity_values(X, z.x, z.y)
    return VelocitySample(float(v1[0]), float(v2[0]))


def velocity_trace(
    X: InterfaceState,
    which: str,
    side: str,
    scheme: QuadratureScheme = DEFAULT_SCHEME,
) -> tuple[GridFunction, GridFunction]:
    """One-sided velocity trace on an interface, as functions of x on the grid.

    which: 'upper' for the f-interface, 'lower' for the h-interface;
    side: 'above' or 'below'.  The trace is the principal-value self term plus
    the smooth cross-interface term plus the signed half-jump local term.
    """
    if which not in ("upper", "lower"):
        raise ValueError("which must be 'upper' or 'lower'")
    if side not in ("above", "below"):
        raise ValueError("side must be 'above' or 'below'")
    X.require_admissible()
    g = X.grid
    th1 = X.params.theta1
    th2 = X.params.theta2
    fp = spectral_derivative(X.f)
    hp = spectral_derivative(X.h)

    if which == "upper":
        # PV self term over the f-interface
        self1 = -(th1 / np.pi) * apply_B([X.f], [X.f], fp, scheme).values
        self2 = (th1 / np.pi) * apply_B([], [X.f], fp, scheme).values
        # smooth cross term: kernel numerators (-delta X, s) against h'
        cross1 = -(th2 / np.pi) * layer_operator(
            LayerKind.C, X, hp, m=1, p=1, scheme=scheme
        ).values
        cross2 = (th2 / np.pi) * layer_operator(LayerKind.D, X, hp, scheme=scheme).values
        sign = -1.0 if side == "above" else 1.0
        up = fp.values
        denom = 1.0 + up * up
        jump1 = sign * th1 * up / denom
        jump2 = sign * th1 * up * up / denom
    else:
        self1 = -(th2 / np.pi) * apply_B([X.h], [X.h], hp, scheme).values
        self2 = (th2 / np.pi) * apply_B([], [X.h], hp, scheme).values
        cross1 = -(th1 / np.pi) * layer_operator(
            LayerKind.C_PRIME, X, fp, m=1, p=1, scheme=scheme
        ).values
        cross2 = (th1 / np.pi) * layer_operator(
            LayerKind.D_PRIME, X, fp, scheme=scheme
        ).values
        sign = -1.0 if side == "above" else 1.0
        up = hp.values
        denom = 1.0 + up * up
        jump1 = sign * th2 * up / denom
        jump2 = sign * th2 * up * up / denom

    return (
        GridFunction(g, self1 + cross1 + jump1),
        GridFunction(g, self2 + cross2 + jump2),
    )


def _gauss_nodes(a: float, b: float, n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


def _reference_curve(X: InterfaceState, region: str):
    """Height of the region's pressure reference curve and its slope, as callables."""
    if region == "above_f":
        level = float(np.max(np.abs(X.f.values))) + X.params.c_inf + 1.0
        return (lambda x: np.full_like(np.atleast_1d(x), level, dtype=float),
                lambda x: np.zeros_like(np.atleast_1d(x), dtype=float))
    if region == "below_h":
        level = -float(np.max(np.abs(X.h.values))) - 1.0
        return (lambda x: np.full_like(np.atleast_1d(x), level, dtype=float),
                lambda x: np.zeros_like(np.atleast_1d(x), dtype=float))
    mid = GridFunction(X.grid, 0.5 * (X.params.c_inf + X.f.values + X.h.values))
    midp = spectral_derivative(mid)
    return (lambda x: evaluate_interpolant(mid, x),
            lambda x: evaluate_interpolant(midp, x))


def _region_density(X: InterfaceState, region: str) -> float:
    return {"above_f": X.params.rho1, "between": X.params.rho2, "below_h": X.params.rho3}[region]


def _pressure_raw(
    X: InterfaceState, region: str, x: float, y: float, quad_n: int, path: str = "curve"
) -> float:
    """Path-integral pressure in one region with its constant set to zero.

    path 'curve' follows the region's reference curve to x and then a vertical
    leg; 'direct' goes vertically at x = 0 and then horizontally at height y
    (valid only when that segment stays inside the region).
    """
    curve, slope = _reference_curve(X, region)
    mu_over_k = X.params.viscosity / X.params.permeability
    total = 0.0
    if path == "curve":
        if x != 0.0:
            xs, ws = _gauss_nodes(0.0, x, quad_n)
            v1, v2 = velocity_values(X, xs, curve(xs))
            total += float(np.sum(ws * (v1 + v2 * slope(xs))))
        y0 = float(curve(np.array([x]))[0])
        if y != y0:
            ys, ws = _gauss_nodes(y0, y, quad_n)
            _, v2 = velocity_values(X, np.full_like(ys, x), ys)
            total += float(np.sum(ws * v2))
    elif path == "direct":
        y0 = float(curve(np.array([0.0]))[0])
        if y != y0:
            ys, ws = _gauss_nodes(y0, y, quad_n)
            _, v2 = velocity_values(X, np.zeros_like(ys), ys)
            total += float(np.sum(ws * v2))
        if x != 0.0:
            xs, ws = _gauss_nodes(0.0, x, quad_n)
            if np.min(_interface_clearance(X, xs, np.full_like(xs, y))) < TOO_CLOSE_FACTOR * X.grid.spacing:
                raise ValueError("direct path leaves the region or grazes an interface")
            v1, _ = velocity_values(X, xs, np.full_like(xs, y))
            total += float(np.sum(ws * v1))
    else:
        raise ValueError("path must be 'curve' or 'direct'")
    rho = _region_density(X, region)
    return -mu_over_k * total - rho * X.params.gravity * y


def pressure_constants(X: InterfaceState, quad_n: int = 160) -> dict[str, float]:
    """Region constants making the pressure continuous across both interfaces
    at x = 0 (it is then constant along each interface)."""
    c = {"between": 0.0}
    y_f = X.params.c_inf + float(evaluate_interpolant(X.f, 0.0)[0])
    y_h = float(evaluate_interpolant(X.h, 0.0)[0])
    c["above_f"] = (
        _pressure_raw(X, "between", 0.0, y_f, quad_n)
        - _pressure_raw(X, "above_f", 0.0, y_f, quad_n)
    )
    c["below_h"] = (
        _pressure_raw(X, "between", 0.0, y_h, quad_n)
        - _pressure_raw(X, "below_h", 0.0, y_h, quad_n)
    )
    return c


def pressure_at(
    X: InterfaceState,
    z: FieldPoint,
    quad_n: int = 160,
    constants: dict[str, float] | None = None,
    path: str = "curve",
) -> float:
    """Pressure at a point off the interfaces, reconstructed by a path integral
    along the region's reference curve plus a vertical leg."""
    if z.region == "on_interface":
        raise ValueError("pressure is evaluated off the interfaces")
    clearance = float(_interface_clearance(X, z.x, z.y)[0])
    if clearance < TOO_CLOSE_FACTOR * X.grid.spacing:
        raise ValueError("point too close to an interface for pressure evaluation")
    if constants is None:
        constants = pressure_constants(X, quad_n)
    return _pressure_raw(X, z.region, z.x, z.y, quad_n, path) + constants[z.region]


def pressure_continuity_residual(X: InterfaceState, which: str) -> float:
    """Max drift of the pressure jump along an interface.

    The one-sided pressure gradients are -(mu/k) v_side - (0, rho_side g); the
    jump of the tangential component, integrated along the interface from the
    calibration point, measures how far the reconstructed pressures are from
    continuous.  Computed entirely from the exact trace formulas.
    """
    g = X.grid
    mu_over_k = X.params.viscosity / X.params.permeability
    grav = X.params.gravity
    above = velocity_trace(X, which, "above")
    below = velocity_trace(X, which, "below")
    if which == "upper":
        yc = GridFunction(g, X.params.c_inf + X.f.values)
        drho = X.params.rho1 - X.params.rho2
    else:
        yc = X.h
        drho = X.params.rho2 - X.params.rho3
    ycp = spectral_derivative(yc)
    dv1 = above[0].values - below[0].values
    dv2 = above[1].values - below[1].values
    integrand = -mu_over_k * (dv1 + dv2 * ycp.values) - drho * grav * ycp.values
    # cumulative integral: spectral antiderivative of the zero-mean part plus
    # a linear-in-x drift from the mean
    ghat = np.fft.fft(integrand)
    k = g.wavenumbers
    with np.errstate(divide="ignore", invalid="ignore"):
        anti = np.where(k != 0, ghat / (1j * k), 0.0)
    anti[g.n_points // 2] = 0.0
    cumulative = np.real(np.fft.ifft(anti))
    cumulative -= cumulative[0]
    mean_drift = np.mean(integrand) * g.period
    return float(np.max(np.abs(cumulative)) + abs(mean_drift))


@dataclass(frozen=True)
class FieldIdentityReport:
    max_divergence: float
    max_curl: float
    stencil: float
    n_points: int


def field_identities_probe(
    X: InterfaceState,
    stencil: float = 1e-4,
    points: list[tuple[float, float]] | None = None,
) -> FieldIdentityReport:
    """Central-difference divergence and curl of the bulk velocity at probe
    points kept at least 10 stencil widths away from both interfaces."""
    if points is None:
        xs = X.grid.nodes[:: max(1, X.grid.n_points // 8)]
        f_max = X.params.c_inf + float(np.max(X.f.values))
        h_min = float(np.min(X.h.values))
        mid = 0.5 * (X.params.c_inf + X.f.values + X.h.values)
        points = (
            [(float(x), f_max + 0.5) for x in xs]
            + [(float(x), h_min - 0.5) for x in xs]
            + [(float(x), float(evaluate_interpolant(GridFunction(X.grid, mid), x)[0])) for x in xs]
        )
    pts = np.asarray(points, dtype=float)
    clear = _interface_clearance(X, pts[:, 0], pts[:, 1])
    keep = clear >= 10 * stencil
    pts = pts[keep]
    if len(pts) == 0:
        raise ValueError("no probe points survive the interface clearance requirement")

    x, y = pts[:, 0], pts[:, 1]
    h = stencil
    v1_xp, v2_xp = velocity_values(X, x + h, y)
    v1_xm, v2_xm = velocity_values(X, x - h, y)
    v1_yp, v2_yp = velocity_values(X, x, y + h)
    v1_ym, v2_ym = velocity_values(X, x, y - h)
    div = (v1_xp - v1_xm) / (2 * h) + (v2_yp - v2_ym) / (2 * h)
    curl = (v2_xp - v2_xm) / (2 * h) - (v1_yp - v1_ym) / (2 * h)
    return FieldIdentityReport(
        float(np.max(np.abs(div))), float(np.max(np.abs(curl))), h, len(pts)
    )


@dataclass(frozen=True)
class HolderProbeResult:
    max_quotient: float
    sup_velocity: float
    pairs: int


def holder_probe(X: InterfaceState, spec: HolderProbeSpec) -> HolderProbeResult:
    """Sample point pairs approaching the upper interface from one side and
    report the worst Hölder quotient |v(z)-v(z')|/|z-z'|^alpha and sup |v|."""
    rng = np.random.default_rng(spec.seed)
    g = X.grid
    P = g.period
    sign = 1.0 if spec.region == "above" else -1.0
    quot = 0.0
    sup_v = 0.0
    eps_min = TOO_CLOSE_FACTOR * g.spacing * 1.5
    for _ in range(spec.pairs):
        x0 = float(rng.uniform(-P / 2, P / 2))
        base = X.params.c_inf + float(evaluate_interpolant(X.f, x0)[0])
        e1 = float(rng.uniform(eps_min, 0.5))
        e2 = float(rng.uniform(eps_min, 0.5))
        dxs = float(rng.uniform(-0.1, 0.1))
        za = (x0, base + sign * e1)
        zb = (x0 + dxs, base + sign * e2)
        # keep the second point on the intended side as well
        base_b = X.params.c_inf + float(evaluate_interpolant(X.f, zb[0])[0])
        zb = (zb[0], base_b + sign * e2)
        va = velocity_values(X, za[0], za[1])
        vb = velocity_values(X, zb[0], zb[1])
        va = np.array([va[0][0], va[1][0]])
        vb = np.array([vb[0][0], vb[1][0]])
        dist = float(np.hypot(za[0] - zb[0], za[1] - zb[1]))
        sup_v = max(sup_v, float(np.linalg.norm(va)), float(np.linalg.norm(vb)))
        if dist > 0:
            quot = max(quot, float(np.linalg.norm(va - vb)) / dist**spec.alpha)
    return HolderProbeResult(quot, sup_v, spec.pairs)
