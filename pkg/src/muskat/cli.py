"""Command-line surface: simulate, dispersion, check-jacobian, field,
identities, diagnose.

Exit codes: 0 success, 2 configuration error, 3 contact suspected,
4 norm blow-up suspected, 5 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, build_initial_state, load_config
from .evolve import (
    SERIES_COLUMNS,
    RunResult,
    SquirtDiagnosticSpec,
    run,
    squirt_diagnostic,
)
from .field import pressure_at, pressure_constants, classify_point, velocity_values
from .grid import Grid, GridFunction
from .layers import identity_report
from .linearize import dispersion_scan, directional_derivative_fd, offdiag_derivative
from .state import InterfaceState, PhysicalParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTACT = 3
EXIT_BLOWUP = 4
EXIT_INTERNAL = 5

_STATUS_EXIT = {
    "completed": EXIT_OK,
    "contact_suspected": EXIT_CONTACT,
    "norm_blowup_suspected": EXIT_BLOWUP,
    "stiffness_abort": EXIT_INTERNAL,
}


def _say(quiet: bool, *parts) -> None:
    if not quiet:
        print(*parts)


def _write_meta(out: Path, cfg: RunConfig | None, status: str, extra: dict | None = None) -> None:
    meta = {
        "version": __version__,
        "status": status,
        "config": cfg.to_dict() if cfg is not None else None,
    }
    if extra:
        meta.update(extra)
    out.mkdir(parents=True, exist_ok=True)
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _write_series(out: Path, result: RunResult, stride: int) -> None:
    rows = result.record.rows
    lines = [",".join(SERIES_COLUMNS)]
    for i, row in enumerate(rows):
        if i % stride == 0 or i == len(rows) - 1:
            lines.append(",".join(f"{v:.17g}" for v in row))
    (out / "series.csv").write_text("\n".join(lines) + "\n")


def _write_snapshot(path: Path, X: InterfaceState) -> None:
    x = X.grid.nodes
    lines = ["x,f,h"]
    for xi, fi, hi in zip(x, X.f.values, X.h.values):
        lines.append(f"{xi:.17g},{fi:.17g},{hi:.17g}")
    path.write_text("\n".join(lines) + "\n")


def _write_field(path: Path, X: InterfaceState, ny: int = 24) -> None:
    grid = X.grid
    xs = grid.nodes[:: max(1, grid.n_points // 32)]
    y_lo = float(np.min(X.h.values)) - 1.0
    y_hi = X.params.c_inf + float(np.max(X.f.values)) + 1.0
    ys = np.linspace(y_lo, y_hi, ny)
    consts = pressure_constants(X)
    lines = ["x,y,v1,v2,p"]
    for yv in ys:
        v1, v2 = velocity_values(X, xs, np.full_like(xs, yv))
        for xv, a, b in zip(xs, v1, v2):
            z = classify_point(X, float(xv), float(yv))
            try:
                p = pressure_at(X, z, quad_n=64, constants=consts)
            except ValueError:
                p = float("nan")
            lines.append(f"{xv:.17g},{yv:.17g},{a:.17g},{b:.17g},{p:.17g}")
    path.write_text("\n".join(lines) + "\n")


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out) if args.out else Path(cfg.output.directory)
    X0 = build_initial_state(cfg)
    result = run(X0, cfg.stepper, snapshot_stride=cfg.output.snapshot_stride)
    _write_meta(out, cfg, result.status, {"steps": len(result.record.rows) - 1})
    _write_series(out, result, cfg.output.series_stride)
    snapdir = out / "snapshots"
    snapdir.mkdir(parents=True, exist_ok=True)
    for step_index, _t, X in result.snapshots:
        _write_snapshot(snapdir / f"snap_{step_index:06d}.csv", X)
    if cfg.output.write_field:
        _write_field(out / f"field_{result.snapshots[-1][0]:06d}.csv", result.final_state)
    _say(args.quiet, f"status: {result.status}  steps: {len(result.record.rows) - 1}  out: {out}")
    return _STATUS_EXIT[result.status]


def _params_from_args(args) -> PhysicalParams:
    if args.config:
        return load_config(args.config).physical
    return PhysicalParams.from_thetas(-0.5, -0.5, 1.0)


def cmd_dispersion(args) -> int:
    params = _params_from_args(args)
    modes = [int(m) for m in args.modes.split(",")] if args.modes else list(range(1, 9))
    rows = dispersion_scan(params, modes, eps=args.eps)
    lines = ["k,branch,predicted,measured,relative_mismatch"]
    worst = 0.0
    for r in rows:
        lines.append(
            f"{r.mode},{r.branch},{r.predicted:.17g},{r.measured:.17g},{r.relative_mismatch:.3e}"
        )
        worst = max(worst, r.relative_mismatch)
    text = "\n".join(lines)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "dispersion.csv").write_text(text + "\n")
    _say(args.quiet, text)
    _say(args.quiet, f"worst relative mismatch: {worst:.3e}")
    return EXIT_OK if worst <= 1e-3 else EXIT_INTERNAL


def _random_admissible_state(grid: Grid, params: PhysicalParams, rng) -> InterfaceState:
    x = grid.nodes
    scale = 0.1 * params.c_inf
    def smooth():
        out = np.zeros_like(x)
        for k in range(1, 4):
            out += rng.normal() * np.cos(2 * np.pi * k / grid.period * x)
            out += rng.normal() * np.sin(2 * np.pi * k / grid.period * x)
        return scale * out / 3.0
    return InterfaceState(GridFunction(grid, smooth()), GridFunction(grid, smooth()), params)


def cmd_check_jacobian(args) -> int:
    params = _params_from_args(args)
    grid = Grid(256, 2 * np.pi)
    rng = np.random.default_rng(7)
    worst = 0.0
    for trial in range(3):
        X = _random_admissible_state(grid, params, rng)
        v = GridFunction(grid, 0.1 * np.cos(grid.nodes) + 0.05 * np.sin(2 * grid.nodes))
        analytic = offdiag_derivative(X, v)
        fd1, _fd2 = directional_derivative_fd(X, (GridFunction.zeros(grid), v), eps=args.eps)
        rel = float(
            np.max(np.abs(analytic.values - fd1.values)) / max(np.max(np.abs(fd1.values)), 1e-300)
        )
        worst = max(worst, rel)
        _say(args.quiet, f"trial {trial}: relative error {rel:.3e}")
    _say(args.quiet, f"worst relative error: {worst:.3e}")
    return EXIT_OK if worst <= 1e-6 else EXIT_INTERNAL


def cmd_field(args) -> int:
    cfg = load_config(args.config)
    X = build_initial_state(cfg)
    out = Path(args.out) if args.out else Path(cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    _write_field(out / "field_000000.csv", X)
    _say(args.quiet, f"field written to {out / 'field_000000.csv'}")
    return EXIT_OK


def cmd_identities(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        grid, params = cfg.grid, cfg.physical
    else:
        grid = Grid(256, 2 * np.pi)
        params = PhysicalParams.from_thetas(-0.5, -0.5, 1.0)
    x = grid.nodes
    kappa = 2 * np.pi / grid.period
    X = InterfaceState(
        GridFunction(grid, 0.15 * params.c_inf * np.cos(kappa * x)),
        GridFunction(grid, 0.1 * params.c_inf * np.sin(2 * kappa * x)),
        params,
    )
    Xt = X.perturbed(
        0.05 * params.c_inf * np.sin(kappa * x), -0.04 * params.c_inf * np.cos(3 * kappa * x)
    )
    density = GridFunction(grid, np.exp(np.sin(kappa * x)) - 1.2)
    report = identity_report(X, Xt, density)
    _say(args.quiet, str(report))
    return EXIT_OK if report.passed else EXIT_INTERNAL


def cmd_diagnose(args) -> int:
    rundir = Path(args.out if args.out else ".")
    meta_path = rundir / "meta.json"
    if not meta_path.exists():
        print(f"no meta.json in {rundir}", file=sys.stderr)
        return EXIT_CONFIG
    meta = json.loads(meta_path.read_text())
    cfg_dict = meta.get("config")
    if cfg_dict is None:
        print("meta.json carries no config echo", file=sys.stderr)
        return EXIT_CONFIG
    from .config import config_from_dict
    from .evolve import RunRecord

    cfg = config_from_dict(cfg_dict)
    grid = cfg.grid
    snaps = sorted((rundir / "snapshots").glob("snap_*.csv"))
    if not snaps:
        print("run directory has no snapshots", file=sys.stderr)
        return EXIT_CONFIG
    series = np.genfromtxt(rundir / "series.csv", delimiter=",", names=True)
    # snapshots are labelled by accepted-step index; recover times from series order
    ts = np.atleast_1d(series["t"])
    snapshots = []
    for path in snaps:
        idx = int(path.stem.split("_")[1])
        data = np.genfromtxt(path, delimiter=",", names=True)
        X = InterfaceState(
            GridFunction(grid, np.asarray(data["f"], dtype=float)),
            GridFunction(grid, np.asarray(data["h"], dtype=float)),
            cfg.physical,
        )
        t = float(ts[min(idx, len(ts) - 1)])
        snapshots.append((idx, t, X))
    final = snapshots[-1][2]
    # velocity-bound estimate for the diagnostic window slope
    xs = grid.nodes[:: max(1, grid.n_points // 16)]
    mid = 0.5 * (cfg.physical.c_inf + final.f.values + final.h.values)
    mids = np.interp(xs, grid.nodes, mid)
    v1, v2 = velocity_values(final, xs, mids)
    c1 = max(float(np.max(np.hypot(v1, v2))), 1e-6)
    result = RunResult(RunRecord(), meta.get("status", "completed"), final, snapshots)
    spec = SquirtDiagnosticSpec(x0=0.0, delta=grid.period / 8, c1=c1)
    rep = squirt_diagnostic(result, spec)
    out = {
        "window_delta": spec.delta,
        "velocity_bound_estimate": c1,
        "area_nondecreasing": rep.area_nondecreasing,
        "final_area": rep.final_area,
        "final_min_gap": rep.final_min_gap,
        "gap_localized": rep.gap_localized,
    }
    (rundir / "diagnose.json").write_text(json.dumps(out, indent=2) + "\n")
    _say(args.quiet, json.dumps(out, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="muskat",
        description="Contour-integral simulator for a three-phase porous-medium interface flow",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "simulate": cmd_simulate,
        "dispersion": cmd_dispersion,
        "check-jacobian": cmd_check_jacobian,
        "field": cmd_field,
        "identities": cmd_identities,
        "diagnose": cmd_diagnose,
    }
    for name, func in specs.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="path to a JSON run configuration")
        p.add_argument("--out", default=None, help="output (or run) directory")
        p.add_argument("--modes", default=None, help="comma-separated mode list")
        p.add_argument("--eps", type=float, default=1e-6, help="perturbation size")
        p.add_argument("--quiet", action="store_true")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("simulate", "field") and not args.config:
        print("--config is required for this command", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
