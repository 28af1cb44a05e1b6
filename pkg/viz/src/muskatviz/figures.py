"""Builds the four figure kinds from a run directory's CSV/JSON artifacts.

The run directory layout is a read-only contract:
  meta.json                  run metadata with the echoed configuration
  series.csv                 monitor time series (t, dt, gap, dist, ...)
  snapshots/snap_NNNNNN.csv  interface profiles (x, f, h) at step NNNNNN
  field_NNNNNN.csv           velocity/pressure samples (x, y, v1, v2, p)
  dispersion.csv             predicted vs. measured linear rates
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("interfaces", "monitors", "dispersion", "field")

DISPERSION_BAND = 1e-3  # relative half-width of the tolerance band


class ArtifactError(RuntimeError):
    """A required artifact is missing or does not parse."""


@dataclass(frozen=True)
class FigureSpec:
    run_dir: Path
    kind: str
    out_path: Path
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "run_dir", Path(self.run_dir))
        object.__setattr__(self, "out_path", Path(self.out_path))
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


def _load_csv(path: Path) -> np.ndarray:
    if not path.is_file():
        raise ArtifactError(f"missing artifact: {path}")
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except (ValueError, OSError) as exc:
        raise ArtifactError(f"cannot parse {path}: {exc}") from exc
    if data.dtype.names is None:
        raise ArtifactError(f"{path} has no header row")
    return np.atleast_1d(data)


def _load_meta(run_dir: Path) -> dict:
    path = run_dir / "meta.json"
    if not path.is_file():
        raise ArtifactError(f"missing artifact: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"cannot parse {path}: {exc}") from exc


def _require_columns(data: np.ndarray, names: tuple[str, ...], path: Path) -> None:
    missing = [n for n in names if n not in data.dtype.names]
    if missing:
        raise ArtifactError(f"{path} lacks columns {missing}; has {data.dtype.names}")


def _check_run_dir(run_dir: Path) -> None:
    if not run_dir.is_dir():
        raise ArtifactError(f"run directory not found: {run_dir}")
    _load_meta(run_dir)
    if not (run_dir / "series.csv").is_file():
        raise ArtifactError(f"missing artifact: {run_dir / 'series.csv'}")


def _figure_interfaces(spec: FigureSpec) -> plt.Figure:
    meta = _load_meta(spec.run_dir)
    try:
        c_inf = float(meta["config"]["physical"]["c_inf"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"meta.json lacks config.physical.c_inf: {exc}") from exc

    snaps = sorted((spec.run_dir / "snapshots").glob("snap_*.csv"))
    if not snaps:
        raise ArtifactError(f"no snapshots in {spec.run_dir / 'snapshots'}")
    snaps = snaps[:: spec.stride]

    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=150)
    cmap = plt.get_cmap("viridis")
    for i, path in enumerate(snaps):
        data = _load_csv(path)
        _require_columns(data, ("x", "f", "h"), path)
        color = cmap(i / max(len(snaps) - 1, 1))
        label = path.stem.replace("snap_", "step ") if i in (0, len(snaps) - 1) else None
        ax.plot(data["x"], c_inf + data["f"], color=color, lw=1.0, label=label)
        ax.plot(data["x"], data["h"], color=color, lw=1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("interfaces  y = c∞ + f (upper),  y = h (lower)")
    ax.legend(loc="best", fontsize=8)
    return fig


def _figure_monitors(spec: FigureSpec) -> plt.Figure:
    path = spec.run_dir / "series.csv"
    data = _load_csv(path)
    _require_columns(
        data,
        ("t", "gap", "dist", "hnorm_f", "hnorm_h", "himode_frac", "surface_area"),
        path,
    )
    data = data[:: spec.stride]
    t = data["t"]

    fig, axes = plt.subplots(2, 2, figsize=(9, 6), dpi=150, sharex=True)
    ax = axes[0, 0]
    ax.plot(t, data["gap"], label="vertical gap")
    ax.plot(t, data["dist"], label="distance", ls="--")
    ax.set_ylabel("separation")
    ax.legend(fontsize=8)

    ax = axes[0, 1]
    ax.plot(t, data["hnorm_f"], label="|f| (Sobolev)")
    ax.plot(t, data["hnorm_h"], label="|h| (Sobolev)", ls="--")
    ax.set_ylabel("norm")
    ax.legend(fontsize=8)

    ax = axes[1, 0]
    ax.plot(t, data["surface_area"], color="tab:green")
    ax.set_ylabel("surface area")
    ax.set_xlabel("t")

    ax = axes[1, 1]
    ax.plot(t, data["himode_frac"], color="tab:red")
    ax.set_ylabel("high-mode energy fraction")
    ax.set_xlabel("t")

    fig.suptitle("run monitors")
    fig.tight_layout()
    return fig


def _figure_dispersion(spec: FigureSpec) -> plt.Figure:
    path = spec.run_dir / "dispersion.csv"
    data = _load_csv(path)
    _require_columns(data, ("k", "branch", "predicted", "measured"), path)

    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=150)
    for branch, marker in ((0, "o"), (1, "s")):
        sel = data[data["branch"] == branch]
        if len(sel) == 0:
            continue
        order = np.argsort(sel["k"])
        k = sel["k"][order]
        pred = sel["predicted"][order]
        meas = sel["measured"][order]
        ax.fill_between(
            k,
            pred - DISPERSION_BAND * np.abs(pred),
            pred + DISPERSION_BAND * np.abs(pred),
            alpha=0.25,
            label=f"branch {branch} ±{DISPERSION_BAND:g} band",
        )
        ax.plot(k, pred, lw=1.0)
        ax.plot(k, meas, marker, ms=4, ls="none", label=f"branch {branch} measured")
    ax.set_xlabel("mode k")
    ax.set_ylabel("decay rate")
    ax.set_title("linear decay rates: predicted bands vs. measured")
    ax.legend(fontsize=8)
    return fig


def _figure_field(spec: FigureSpec) -> plt.Figure:
    fields = sorted(spec.run_dir.glob("field_*.csv"))
    if not fields:
        raise ArtifactError(f"no field_*.csv in {spec.run_dir}")
    path = fields[-1]
    data = _load_csv(path)
    _require_columns(data, ("x", "y", "v1", "v2", "p"), path)
    sub = data[:: spec.stride]

    fig, ax = plt.subplots(figsize=(7, 5), dpi=150)
    finite_p = np.isfinite(data["p"])
    if np.count_nonzero(finite_p) >= 4:
        tric = ax.tricontourf(
            data["x"][finite_p], data["y"][finite_p], data["p"][finite_p],
            levels=12, cmap="coolwarm", alpha=0.6,
        )
        fig.colorbar(tric, ax=ax, label="pressure")
    ax.quiver(sub["x"], sub["y"], sub["v1"], sub["v2"], angles="xy", width=0.0025)

    snaps = sorted((spec.run_dir / "snapshots").glob("snap_*.csv"))
    if snaps:
        meta = _load_meta(spec.run_dir)
        c_inf = float(meta["config"]["physical"]["c_inf"])
        prof = _load_csv(snaps[-1])
        _require_columns(prof, ("x", "f", "h"), snaps[-1])
        ax.plot(prof["x"], c_inf + prof["f"], "k-", lw=1.2)
        ax.plot(prof["x"], prof["h"], "k-", lw=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"velocity field and pressure ({path.name})")
    return fig


_BUILDERS = {
    "interfaces": _figure_interfaces,
    "monitors": _figure_monitors,
    "dispersion": _figure_dispersion,
    "field": _figure_field,
}


def build_figure(spec: FigureSpec) -> plt.Figure:
    """Build (but do not save) the requested figure; raises ArtifactError on
    missing or corrupt inputs."""
    _check_run_dir(spec.run_dir)
    return _BUILDERS[spec.kind](spec)


def render(spec: FigureSpec) -> Path:
    """Render the figure to spec.out_path and return that path."""
    fig = build_figure(spec)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return spec.out_path
