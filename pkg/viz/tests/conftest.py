import json
import subprocess
import sys
from pathlib import Path

import pytest


def _simulate(out_dir: Path, config: dict, extra: list[str] | None = None) -> None:
    cfg_path = out_dir / "config.json"
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_path.write_text(json.dumps(config))
    cmd = [sys.executable, "-m", "muskat.cli", "simulate", "--config", str(cfg_path),
           "--out", str(out_dir), "--quiet"]
    subprocess.run(cmd, check=True)
    if extra:
        subprocess.run([sys.executable, "-m", "muskat.cli", *extra], check=True)


@pytest.fixture(scope="session")
def reference_run(tmp_path_factory) -> Path:
    """A completed decaying run with snapshots, a field sample, and a
    dispersion table, produced through the simulator's CLI only."""
    out = tmp_path_factory.mktemp("runs") / "reference"
    config = {
        "physical": {"rho1": 0.5, "rho2": 1.0, "rho3": 1.5, "c_inf": 1.0},
        "grid": {"n_points": 64, "period": 6.283185307179586},
        "initial": {"profile": "gaussian_bumps", "amplitude": 0.15, "width": 0.6,
                    "centers": [0.0]},
        "stepper": {"t_end": 0.3, "dt_initial": 5e-3},
        "output": {"snapshot_stride": 10, "write_field": True},
    }
    _simulate(out, config,
              extra=["dispersion", "--out", str(out), "--modes", "1,2,3,4", "--quiet"])
    return out


@pytest.fixture(scope="session")
def flat_run(tmp_path_factory) -> Path:
    """A flat (stationary) run: every separation monitor stays at c_inf."""
    out = tmp_path_factory.mktemp("runs") / "flat"
    config = {
        "physical": {"rho1": 0.5, "rho2": 1.0, "rho3": 1.5, "c_inf": 1.0},
        "grid": {"n_points": 64, "period": 6.283185307179586},
        "initial": {"profile": "flat"},
        "stepper": {"t_end": 0.05, "dt_initial": 5e-3},
        "output": {"snapshot_stride": 5},
    }
    _simulate(out, config)
    return out
