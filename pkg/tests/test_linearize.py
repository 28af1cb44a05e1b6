"""Linearization: symbol matrix, dispersion scan, analytic vs FD Jacobian."""

import numpy as np
import pytest

from muskat import (
    Grid,
    GridFunction,
    InterfaceState,
    PhysicalParams,
    directional_derivative_fd,
    dispersion_scan,
    flat_symbol_matrix,
    offdiag_derivative,
)

from support import random_band_limited, random_state


class TestSymbolMatrix:
    def test_zero_mode(self, params):
        m = flat_symbol_matrix(params, 0)
        assert np.all(m.matrix == 0.0)

    def test_k1_reference_eigenvalues(self):
        """Theta1 = Theta2 = -1/2, c = 1: eigenvalues -(1/2)(1 +- 1/e)."""
        params = PhysicalParams.from_thetas(-0.5, -0.5, 1.0)
        vals = np.sort(flat_symbol_matrix(params, 1).eigenvalues)
        expected = np.sort([-0.5 * (1 + np.exp(-1)), -0.5 * (1 - np.exp(-1))])
        assert np.allclose(vals, expected, rtol=1e-12)
        assert vals[0] == pytest.approx(-0.68394, abs=5e-6)
        assert vals[1] == pytest.approx(-0.31606, abs=5e-6)

    def test_entries(self, params):
        k = 3
        m = flat_symbol_matrix(params, k).matrix
        e = np.exp(-params.c_inf * k)
        assert m[0, 0] == pytest.approx(k * params.theta1)
        assert m[1, 1] == pytest.approx(k * params.theta2)
        assert m[0, 1] == pytest.approx(k * params.theta2 * e)
        assert m[1, 0] == pytest.approx(k * params.theta1 * e)

    def test_eigenvalues_negative_for_stable_densities(self, params):
        for k in range(1, 9):
            vals = flat_symbol_matrix(params, k).eigenvalues
            assert np.all(np.real(vals) < 0)

    def test_locked_against_fd(self, params):
        """Each matrix entry matches a finite-difference directional derivative
        of Phi at the flat state."""
        grid = Grid(256, 2 * np.pi)
        x = grid.nodes
        k, eps = 2, 1e-6
        m = flat_symbol_matrix(params, k).matrix
        profile = np.cos(k * x)
        flat = InterfaceState.flat(grid, params)
        for col, (df, dh) in enumerate([(profile, 0.0 * x), (0.0 * x, profile)]):
            d1, d2 = directional_derivative_fd(
                flat, (GridFunction(grid, df), GridFunction(grid, dh)), eps=eps
            )
            # response stays on the cos(kx) profile; project out the amplitudes
            a1 = 2 * np.mean(d1.values * profile)
            a2 = 2 * np.mean(d2.values * profile)
            assert a1 == pytest.approx(m[0, col], abs=1e-6)
            assert a2 == pytest.approx(m[1, col], abs=1e-6)


class TestDispersion:
    def test_reference_rates(self):
        params = PhysicalParams.from_thetas(-0.5, -0.5, 1.0)
        rows = dispersion_scan(params, range(1, 9), n_points=512)
        for row in rows:
            k = row.mode
            branch_rates = sorted(
                [-(k / 2) * (1 + np.exp(-k)), -(k / 2) * (1 - np.exp(-k))]
            )
            assert row.predicted == pytest.approx(branch_rates[row.branch], rel=1e-12)
            assert row.relative_mismatch <= 1e-3

    def test_rates_strictly_negative(self, params):
        rows = dispersion_scan(params, [1, 2, 3])
        assert all(r.measured < 0 for r in rows)


class TestOffdiagDerivative:
    def test_matches_fd(self, params):
        grid = Grid(256, 2 * np.pi)
        rng = np.random.default_rng(0)
        X = random_state(grid, params, rng)
        v = random_band_limited(grid, rng, 0.2)
        analytic = offdiag_derivative(X, v).values
        zero = GridFunction.zeros(grid)
        fd1, _ = directional_derivative_fd(X, (zero, v), eps=1e-5)
        scale = max(np.max(np.abs(fd1.values)), 1e-300)
        assert np.max(np.abs(analytic - fd1.values)) / scale < 1e-6

    def test_off_to_diag_ratio_vanishes(self, params):
        """The h -> Phi_1 coupling is smoothing: its gain at mode k decays
        relative to the diagonal |k| growth."""
        grid = Grid(256, 2 * np.pi)
        flat = InterfaceState.flat(grid, params)
        ratios = []
        for k in (2, 8, 16):
            v = GridFunction(grid, np.cos(k * grid.nodes))
            off = np.max(np.abs(offdiag_derivative(flat, v).values))
            diag = abs(params.theta1) * k
            ratios.append(off / diag)
        assert ratios[0] > ratios[1] > ratios[2]

    def test_flat_symmetric_modes_diagonalize(self, params):
        """At the flat state the (1, +-1) mode pairing diagonalizes the FD
        Jacobian of a symmetric-parameter system."""
        p = PhysicalParams.from_thetas(-0.5, -0.5, params.c_inf)
        grid = Grid(256, 2 * np.pi)
        flat = InterfaceState.flat(grid, p)
        k = 1
        profile = np.cos(k * grid.nodes)
        for sgn in (1.0, -1.0):
            d1, d2 = directional_derivative_fd(
                flat,
                (GridFunction(grid, profile), GridFunction(grid, sgn * profile)),
                eps=1e-6,
            )
            # eigenmode: response proportional to the same (1, sgn) pairing
            resid = d1.values - sgn * d2.values
            assert np.max(np.abs(resid)) < 1e-6
