"""Time integration: stepper orders, acceptance control, run statuses,
monitor series, and the windowed-area diagnostic."""

import numpy as np
import pytest

from muskat import (
    Grid,
    GridFunction,
    InterfaceState,
    PhysicalParams,
    RunRecord,
    SERIES_COLUMNS,
    SquirtDiagnosticSpec,
    StepperConfig,
    cfl_limit,
    compute_phi,
    flat_symbol_matrix,
    interface_distance,
    run,
    sobolev_norm,
    squirt_diagnostic,
    step,
)


def eigenmode_state(grid, params, k=1, eps=1e-3, branch=0):
    vals, vecs = flat_symbol_matrix(params, k).eigenpairs()
    a, b = vecs[0, branch], vecs[1, branch]
    profile = np.cos(k * grid.nodes)
    return (
        InterfaceState(
            GridFunction(grid, eps * a * profile),
            GridFunction(grid, eps * b * profile),
            params,
        ),
        float(vals[branch]),
    )


class TestStepperConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            StepperConfig(method="euler")
        with pytest.raises(ValueError):
            StepperConfig(cfl_safety=0.0)
        with pytest.raises(ValueError):
            StepperConfig(dt_min=1.0, dt_initial=0.5)
        with pytest.raises(ValueError):
            StepperConfig(gap_floor=-1.0)

    def test_monitor_r_coercion(self):
        cfg = StepperConfig(monitor_r=1.5)
        assert cfg.monitor_r.r == 1.5


class TestSteppers:
    def test_rk4_order_four(self, grid, params):
        """Global error against a fine-dt reference decays at fourth order."""
        X0, _ = eigenmode_state(grid, params, eps=0.2)
        T = 0.8

        def integrate(n_steps):
            X = X0
            dt = T / n_steps
            for _ in range(n_steps):
                X = step(X, dt, "rk4")
            return X

        ref = integrate(64)
        errors, dts = [], []
        for n in (4, 8, 16):
            Xn = integrate(n)
            err = np.max(np.abs(Xn.f.values - ref.f.values)) + np.max(
                np.abs(Xn.h.values - ref.h.values)
            )
            errors.append(err)
            dts.append(T / n)
        order = np.polyfit(np.log(dts), np.log(errors), 1)[0]
        assert order == pytest.approx(4.0, abs=0.2)

    def test_imex_order_two(self, grid, params):
        X0, _ = eigenmode_state(grid, params, eps=0.02)
        T = 0.08

        def integrate(n_steps):
            X = X0
            dt = T / n_steps
            for _ in range(n_steps):
                X = step(X, dt, "rk2_imex")
            return X

        ref = integrate(256)
        errors, dts = [], []
        for n in (4, 8, 16):
            Xn = integrate(n)
            err = np.max(np.abs(Xn.f.values - ref.f.values))
            errors.append(err)
            dts.append(T / n)
        order = np.polyfit(np.log(dts), np.log(errors), 1)[0]
        assert order == pytest.approx(2.0, abs=0.3)

    def test_unknown_method(self, grid, params):
        X = InterfaceState.flat(grid, params)
        with pytest.raises(ValueError):
            step(X, 0.01, "euler2")

    def test_eigenmode_decay_rate(self, grid, params):
        """A symbol eigenmode decays at its predicted linear rate."""
        X, rate = eigenmode_state(grid, params, k=1, eps=1e-4)
        T, n = 0.5, 100
        amp0 = np.max(np.abs(X.f.values))
        for _ in range(n):
            X = step(X, T / n, "rk4")
        amp1 = np.max(np.abs(X.f.values))
        assert amp1 / amp0 == pytest.approx(np.exp(rate * T), rel=1e-3)


class TestRunControl:
    def test_completed_run_monitors(self, params):
        grid = Grid(128, 2 * np.pi)
        X0, _ = eigenmode_state(grid, params, eps=0.01)
        cfg = StepperConfig(t_end=0.2, dt_initial=5e-3)
        result = run(X0, cfg, snapshot_stride=10)
        assert result.status == "completed"
        t = result.record.column("t")
        assert t[-1] == pytest.approx(0.2, abs=1e-12)
        assert np.all(np.diff(t) > 0)

        # mean drift per unit time
        for name in ("mean_f", "mean_h"):
            drift = abs(result.record.column(name)[-1] - result.record.column(name)[0])
            assert drift / t[-1] <= 1e-7

        # high-mode fraction monotone (up to tiny floating noise) for small data
        himode = result.record.column("himode_frac")
        assert np.all(np.diff(himode) <= 1e-12)

        # norms decay under stable stratification
        hn = result.record.column("hnorm_f")
        assert hn[-1] < hn[0]

    def test_bit_identical_reruns(self, params):
        grid = Grid(128, 2 * np.pi)
        X0, _ = eigenmode_state(grid, params, eps=0.01)
        cfg = StepperConfig(t_end=0.05, dt_initial=5e-3)
        r1 = run(X0, cfg)
        r2 = run(X0, cfg)
        assert r1.record.rows == r2.record.rows
        assert np.array_equal(r1.final_state.f.values, r2.final_state.f.values)
        assert np.array_equal(r1.final_state.h.values, r2.final_state.h.values)

    def test_initial_gap_below_floor_rejected(self, grid, params):
        X0 = InterfaceState.flat(grid, params)
        cfg = StepperConfig(gap_floor=2 * params.c_inf)
        with pytest.raises(ValueError):
            run(X0, cfg)

    def test_contact_suspected_with_synthetic_flow(self, grid, params):
        """A synthetic contracting flow drives the gap to the floor; the
        controller halves dt to dt_min and reports suspected contact."""

        def closing_rhs(X):
            return (
                GridFunction(X.grid, np.full(X.grid.n_points, -2.0)),
                GridFunction(X.grid, np.full(X.grid.n_points, 2.0)),
            )

        X0 = InterfaceState.flat(grid, params)
        cfg = StepperConfig(t_end=1.0, dt_initial=0.05, gap_floor=0.5)
        result = run(X0, cfg, rhs=closing_rhs)
        assert result.status == "contact_suspected"
        assert float(np.min(result.final_state.gap_values())) > cfg.gap_floor

    def test_stiffness_abort_with_nonfinite_flow(self, grid, params):
        def exploding_rhs(X):
            raise ValueError("synthetic failure")

        X0 = InterfaceState.flat(grid, params)
        cfg = StepperConfig(t_end=1.0, dt_initial=0.05)
        result = run(X0, cfg, rhs=exploding_rhs)
        assert result.status == "stiffness_abort"

    def test_norm_blowup_detected_with_synthetic_flow(self, grid, params):
        def growing_rhs(X):
            # equal growth on both interfaces keeps the gap constant, so only
            # the norm monitor can trip
            g = 50.0 * X.f.values + np.cos(X.grid.nodes)
            return GridFunction(X.grid, g), GridFunction(X.grid, g)

        X0 = InterfaceState.flat(grid, params)
        cfg = StepperConfig(t_end=5.0, dt_initial=0.02, norm_ceiling=10.0)
        result = run(X0, cfg, rhs=growing_rhs)
        assert result.status == "norm_blowup_suspected"
        assert sobolev_norm(result.final_state.f, cfg.monitor_r) > cfg.norm_ceiling

    def test_cfl_limit(self, grid, params):
        cfg = StepperConfig(cfl_safety=0.5)
        X = InterfaceState.flat(grid, params)
        expected = 0.5 * grid.spacing / (abs(params.theta1) + abs(params.theta2))
        assert cfl_limit(X, cfg) == pytest.approx(expected)


class TestRunRecord:
    def test_series_columns(self):
        assert SERIES_COLUMNS == (
            "t",
            "dt",
            "gap",
            "dist",
            "hnorm_f",
            "hnorm_h",
            "mean_f",
            "mean_h",
            "himode_frac",
            "surface_area",
        )

    def test_append_validates(self, grid, params):
        rec = RunRecord()
        X = InterfaceState.flat(grid, params)
        rec.append(X, 0.0, 0.0, StepperConfig().monitor_r)
        with pytest.raises(ValueError):
            rec.append(X, 0.0, 0.1, StepperConfig().monitor_r)  # non-increasing t


class TestInterfaceDistance:
    def test_flat(self, grid, params):
        X = InterfaceState.flat(grid, params)
        assert interface_distance(X) == pytest.approx(params.c_inf)

    def test_bounded_by_vertical_gap(self, grid, params):
        x = grid.nodes
        h = GridFunction(grid, 0.5 * params.c_inf * np.exp(-4 * x * x))
        X = InterfaceState(GridFunction.zeros(grid), h, params)
        dist = interface_distance(X)
        vgap = float(np.min(X.gap_values()))
        assert dist <= vgap + 1e-12
        assert dist <= 0.5 * params.c_inf + 1e-12

    def test_offset_bumps_beat_vertical_gap(self, params):
        """Steep bumps offset in x: the Euclidean distance is realized along a
        slanted segment, strictly below the vertical gap; checked against a
        dense resampling oracle."""
        grid = Grid(256, 2 * np.pi)
        x = grid.nodes
        f = GridFunction(grid, -0.45 * np.exp(-20 * (x - 0.25) ** 2))
        h = GridFunction(grid, 0.45 * np.exp(-20 * (x + 0.25) ** 2))
        X = InterfaceState(f, h, params)
        dist = interface_distance(X)
        vgap = float(np.min(X.gap_values()))
        assert dist < vgap

        from muskat.grid import evaluate_interpolant

        xs = np.linspace(-np.pi, np.pi, 4096, endpoint=False)
        up = params.c_inf + evaluate_interpolant(X.f, xs)
        lo = evaluate_interpolant(X.h, xs)
        dx = xs[:, None] - xs[None, :]
        dx = (dx + np.pi) % (2 * np.pi) - np.pi
        dy = up[:, None] - lo[None, :]
        brute = float(np.sqrt(np.min(dx * dx + dy * dy)))
        assert dist == pytest.approx(brute, abs=1e-3)


class TestSquirtDiagnostic:
    def test_windowed_area_nondecreasing_for_stable_run(self, params):
        grid = Grid(128, 2 * np.pi)
        x = grid.nodes
        X0 = InterfaceState(
            GridFunction(grid, 0.2 * np.exp(-4 * x * x)),
            GridFunction(grid, -0.2 * np.exp(-4 * x * x)),
            params,
        )
        cfg = StepperConfig(t_end=0.3, dt_initial=5e-3)
        result = run(X0, cfg, snapshot_stride=5)
        spec = SquirtDiagnosticSpec(x0=0.0, delta=1.0, c1=0.5)
        report = squirt_diagnostic(result, spec)
        assert report.area_nondecreasing
        assert report.final_area > 0
        assert report.final_min_gap > 0

    def test_window_validation(self):
        with pytest.raises(ValueError):
            SquirtDiagnosticSpec(delta=-1.0)
