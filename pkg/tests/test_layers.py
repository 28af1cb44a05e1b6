"""Layer potentials: flat-state Fourier pairs locked by adaptive quadrature,
partial-fraction vs image-sum agreement, derivative consistency, identities."""

import numpy as np
import pytest
from scipy.integrate import quad

from muskat import (
    Grid,
    GridFunction,
    InterfaceState,
    LayerKind,
    LayerRequest,
    PhysicalParams,
    apply_layer,
    frechet_layer,
    identity_report,
    l2_norm,
    layer_operator,
)

from support import random_band_limited, random_state


def flat_state(grid, c_inf=1.0):
    params = PhysicalParams(rho1=0.5, rho2=1.0, rho3=1.5, c_inf=c_inf)
    return InterfaceState.flat(grid, params)


def adaptive_flat_amplitude(kind: LayerKind, k: int, c: float) -> float:
    """Full-line Fourier coefficient of the flat m = 1 kernel against a unit
    mode, via adaptive quadrature: C uses 1/(s^2+c^2), D uses s/(s^2+c^2)."""
    if kind is LayerKind.C:
        val, _ = quad(lambda s: 1.0 / (s * s + c * c), 0, np.inf, weight="cos", wvar=k, epsabs=1e-13, epsrel=1e-11, limit=200)
        return 2 * val
    # D against sin(k x): amplitude of the resulting cos is -(odd-kernel integral)
    val, _ = quad(lambda s: s / (s * s + c * c), 0, np.inf, weight="sin", wvar=k, epsabs=1e-13, epsrel=1e-11, limit=200)
    return 2 * val


class TestFlatFourierPairs:
    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_c1_amplitude(self, k, c):
        """C1(flat)[cos(k.)] = (pi/c) e^{-c k} cos(k.), locked by quadrature."""
        grid = Grid(512, 2 * np.pi)
        X = flat_state(grid, c)
        om = GridFunction(grid, np.cos(k * grid.nodes))
        out = layer_operator(LayerKind.C, X, om)
        closed = (np.pi / c) * np.exp(-c * k)
        oracle = adaptive_flat_amplitude(LayerKind.C, k, c)
        assert closed == pytest.approx(oracle, rel=1e-9)
        expected = closed * np.cos(k * grid.nodes)
        rel = np.max(np.abs(out.values - expected)) / closed
        assert rel < 1e-8

    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_d1_amplitude(self, k, c):
        """D1(flat)[sin(k.)] = -pi e^{-c k} cos(k.), locked by quadrature."""
        grid = Grid(512, 2 * np.pi)
        X = flat_state(grid, c)
        om = GridFunction(grid, np.sin(k * grid.nodes))
        out = layer_operator(LayerKind.D, X, om)
        closed = np.pi * np.exp(-c * k)
        oracle = adaptive_flat_amplitude(LayerKind.D, k, c)
        assert closed == pytest.approx(oracle, rel=1e-8)
        expected = -closed * np.cos(k * grid.nodes)
        rel = np.max(np.abs(out.values - expected)) / closed
        assert rel < 1e-8

    def test_c2_coincident_amplitude(self):
        """m = 2 with coincident flat states: C2[cos k] = (pi/2)(1/c^2)(1/c + k) e^{-ck} cos k."""
        grid = Grid(256, 2 * np.pi)
        c, k = 1.0, 2
        X = flat_state(grid, c)
        om = GridFunction(grid, np.cos(k * grid.nodes))
        out = layer_operator(LayerKind.C, X, om, m=2)
        # full-line pair of 1/(s^2+c^2)^2 at frequency k
        oracle, _ = quad(lambda s: 1.0 / (s * s + c * c) ** 2, 0, np.inf, weight="cos", wvar=k, epsabs=1e-13, epsrel=1e-11, limit=200)
        oracle *= 2
        closed = (np.pi / (2 * c * c)) * (1.0 / c + k) * np.exp(-c * k)
        assert closed == pytest.approx(oracle, rel=1e-9)
        expected = closed * np.cos(k * grid.nodes)
        assert np.max(np.abs(out.values - expected)) / closed < 1e-10


class TestRequestValidation:
    def test_argument_counts(self, grid, params):
        X = InterfaceState.flat(grid, params)
        om = GridFunction.zeros(grid)
        with pytest.raises(ValueError):
            LayerRequest(LayerKind.C, 0, 1, 1, [X], [], om)  # needs m+p=2 states
        with pytest.raises(ValueError):
            LayerRequest(LayerKind.C, 1, 1, 0, [X], [], om)  # needs 1 direction
        with pytest.raises(ValueError):
            LayerRequest(LayerKind.C, 0, 0, 0, [], [], om)  # m >= 1

    def test_inadmissible_state_rejected(self, grid, params):
        bad = InterfaceState(
            GridFunction(grid, np.full(grid.n_points, -params.c_inf)),
            GridFunction.zeros(grid),
            params,
        )
        with pytest.raises(ValueError):
            LayerRequest(LayerKind.C, 0, 1, 0, [bad], [], GridFunction.zeros(grid))


class TestPartialFractionPath:
    def test_distinct_states_match_image_sum(self, grid, params):
        """m = 2 with two distinct states: closed partial fractions vs the
        truncated image-sum kernel."""
        rng = np.random.default_rng(0)
        X = random_state(grid, params, rng)
        Y = random_state(grid, params, rng)
        om = random_band_limited(grid, rng)
        closed = apply_layer(LayerRequest(LayerKind.C, 0, 2, 0, [X, Y], [], om)).values

        from muskat.layers import _image_sum_kernel, _shift_table, _state_delta

        idx = _shift_table(grid.n_points)
        s = (np.arange(grid.n_points) * grid.spacing)[None, :]
        d1 = _state_delta(X, idx, False)
        d2 = _state_delta(Y, idx, False)
        kern = _image_sum_kernel(s, [d1, d2], 0, grid.period, 3000)
        brute = grid.spacing * np.sum(kern * om.values[idx], axis=1)
        assert np.max(np.abs(closed - brute)) < 1e-6

    def test_m3_warns(self, grid, params):
        rng = np.random.default_rng(1)
        X = random_state(grid, params, rng)
        om = random_band_limited(grid, rng)
        with pytest.warns(RuntimeWarning):
            layer_operator(LayerKind.C, X, om, m=3)


class TestFrechetConsistency:
    @pytest.mark.parametrize("kind", list(LayerKind))
    def test_matches_finite_differences(self, grid, params, kind):
        rng = np.random.default_rng(2)
        X = random_state(grid, params, rng)
        om = random_band_limited(grid, rng)
        du = random_band_limited(grid, rng, 0.05)
        dv = random_band_limited(grid, rng, 0.05)
        analytic = frechet_layer(kind, X, om, (du, dv)).values

        def at(t):
            Xt = X.perturbed(t * du.values, t * dv.values)
            return layer_operator(kind, Xt, om).values

        errors = []
        steps = [1e-2, 5e-3, 2.5e-3]
        for eps in steps:
            fd = (at(eps) - at(-eps)) / (2 * eps)
            errors.append(np.max(np.abs(fd - analytic)))
        order = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert order == pytest.approx(2.0, abs=0.1)
        assert errors[-1] < 1e-6 * max(1.0, np.max(np.abs(analytic)))


class TestGainScaling:
    def test_c1_gain_scales_with_gap(self):
        """Halving c_inf in the flat state at most quadruples the C1 gain."""
        grid = Grid(128, 2 * np.pi)
        rng = np.random.default_rng(3)
        oms = [random_band_limited(grid, rng) for _ in range(10)]

        def gain(c):
            X = flat_state(grid, c)
            return max(
                l2_norm(layer_operator(LayerKind.C, X, om)) / l2_norm(om) for om in oms
            )

        assert gain(0.5) <= 4.0 * gain(1.0) + 1e-12

    def test_output_in_h1(self, grid, params):
        from muskat import sobolev_norm

        rng = np.random.default_rng(4)
        X = random_state(grid, params, rng)
        for _ in range(5):
            om = random_band_limited(grid, rng)
            out = layer_operator(LayerKind.C, X, om)
            assert sobolev_norm(out, 1.0) < 20.0 * l2_norm(om)


class TestIdentitySuite:
    def test_all_identities_small(self, params):
        grid = Grid(256, 2 * np.pi)
        rng = np.random.default_rng(5)
        X = random_state(grid, params, rng)
        Xt = random_state(grid, params, rng)
        om = random_band_limited(grid, rng)
        report = identity_report(X, Xt, om)
        assert report.passed, str(report)
        assert set(report.residuals) == {
            "difference_C",
            "difference_C_prime",
            "difference_D",
            "difference_D_prime",
            "derivative_C",
            "derivative_D",
            "ibp_C",
            "ibp_D",
        }

    def test_flat_derivative_identity_with_gaussian(self):
        grid = Grid(256, 2 * np.pi)
        X = flat_state(grid)
        om = GridFunction(grid, np.exp(-grid.nodes**2))
        report = identity_report(X, X, om)
        assert report.residuals["derivative_C"] <= 1e-7
        assert report.residuals["derivative_D"] <= 1e-7
