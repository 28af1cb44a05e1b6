"""JSON run configuration: parsing, validation (collecting every violation),
initial-data profiles, and serialization for run metadata."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .grid import Grid, GridFunction, SobolevIndex
from .evolve import StepperConfig
from .state import InterfaceState, PhysicalParams


class ConfigError(ValueError):
    """Carries the full list of validation problems, not just the first."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(self.errors))


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "runs/out"
    snapshot_stride: int = 10
    series_stride: int = 1
    write_field: bool = False

    def __post_init__(self):
        if self.snapshot_stride < 0 or self.series_stride < 1:
            raise ValueError("snapshot_stride must be >= 0 and series_stride >= 1")


@dataclass(frozen=True)
class RunConfig:
    physical: PhysicalParams
    grid: Grid
    initial: dict
    stepper: StepperConfig
    output: OutputConfig

    def to_dict(self) -> dict:
        d = {
            "physical": asdict(self.physical),
            "grid": {"n_points": self.grid.n_points, "period": self.grid.period},
            "initial": dict(self.initial),
            "stepper": {**asdict(self.stepper), "monitor_r": self.stepper.monitor_r.r},
            "output": asdict(self.output),
        }
        return d


_PROFILES = ("flat", "gaussian_bumps", "sinusoid", "file")


def _periodized_gaussian(x: np.ndarray, center: float, width: float, period: float) -> np.ndarray:
    out = np.zeros_like(x)
    for j in range(-4, 5):
        out += np.exp(-(((x - center + j * period) / width) ** 2))
    return out


def build_initial_state(cfg: RunConfig) -> InterfaceState:
    """Construct the interface pair described by the config's initial block."""
    grid = cfg.grid
    x = grid.nodes
    spec = cfg.initial
    profile = spec.get("profile", "flat")
    if profile == "flat":
        f = np.zeros_like(x)
        h = np.zeros_like(x)
    elif profile == "gaussian_bumps":
        amp = float(spec.get("amplitude", 0.01))
        width = float(spec.get("width", 0.5))
        centers = spec.get("centers", [0.0])
        bump = np.zeros_like(x)
        for c in centers:
            bump += _periodized_gaussian(x, float(c), width, grid.period)
        f = amp * bump
        h = -amp * bump
    elif profile == "sinusoid":
        k = int(spec.get("k", 1))
        amp = float(spec.get("amplitude", 0.01))
        kappa = 2 * np.pi * k / grid.period
        f = amp * np.cos(kappa * x)
        h = float(spec.get("amplitude_h", 0.0)) * np.cos(kappa * x)
    elif profile == "file":
        data = np.genfromtxt(spec["path"], delimiter=",", names=True)
        if len(data["x"]) != grid.n_points:
            raise ConfigError([f"file profile has {len(data['x'])} rows, grid wants {grid.n_points}"])
        f, h = np.asarray(data["f"], dtype=float), np.asarray(data["h"], dtype=float)
    else:
        raise ConfigError([f"unknown initial profile {profile!r}"])
    return InterfaceState(GridFunction(grid, f), GridFunction(grid, h), cfg.physical)


def config_from_dict(raw: dict) -> RunConfig:
    """Validate a raw mapping into a RunConfig, accumulating all violations."""
    errors: list[str] = []

    phys_raw = raw.get("physical", {})
    physical = None
    try:
        physical = PhysicalParams(**phys_raw)
    except (TypeError, ValueError) as exc:
        errors.append(f"physical: {exc}")

    grid = None
    grid_raw = raw.get("grid", {})
    try:
        grid = Grid(int(grid_raw.get("n_points", 256)), float(grid_raw.get("period", 2 * np.pi)))
    except (TypeError, ValueError) as exc:
        errors.append(f"grid: {exc}")

    initial = raw.get("initial", {"profile": "flat"})
    if not isinstance(initial, dict):
        errors.append("initial: must be a mapping")
        initial = {"profile": "flat"}
    elif initial.get("profile", "flat") not in _PROFILES:
        errors.append(
            f"initial: unknown profile {initial.get('profile')!r}; choose from {_PROFILES}"
        )

    stepper = None
    step_raw = dict(raw.get("stepper", {}))
    if "monitor_r" in step_raw:
        try:
            step_raw["monitor_r"] = SobolevIndex(float(step_raw["monitor_r"]))
        except (TypeError, ValueError) as exc:
            errors.append(f"stepper.monitor_r: {exc}")
            del step_raw["monitor_r"]
    try:
        stepper = StepperConfig(**step_raw)
    except (TypeError, ValueError) as exc:
        errors.append(f"stepper: {exc}")

    output = None
    try:
        output = OutputConfig(**raw.get("output", {}))
    except (TypeError, ValueError) as exc:
        errors.append(f"output: {exc}")

    if errors:
        raise ConfigError(errors)

    cfg = RunConfig(physical, grid, initial, stepper, output)

    # admissibility of the built initial state is part of validation
    try:
        state = build_initial_state(cfg)
        state.require_admissible()
        if float(np.min(state.gap_values())) <= stepper.gap_floor:
            errors.append("initial: gap at or below the stepper gap_floor")
    except ConfigError as exc:
        errors.extend(exc.errors)
    except ValueError as exc:
        errors.append(f"initial: {exc}")
    if errors:
        raise ConfigError(errors)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError([f"config file not found: {path}"])
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["config root must be a JSON object"])
    return config_from_dict(raw)


def write_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
