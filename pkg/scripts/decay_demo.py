#!/usr/bin/env python3
"""Run a small stably-stratified relaxation experiment and print its monitors.

Creates a run directory (series.csv, snapshots, meta.json) that the plotting
package can render, then prints a short summary of the decay.
"""

import argparse
import json
from pathlib import Path

from muskat.cli import main as muskat_main


def build_config(path: Path, n_points: int, t_end: float) -> None:
    cfg = {
        "physical": {"rho1": 0.5, "rho2": 1.0, "rho3": 1.5, "c_inf": 1.0},
        "grid": {"n_points": n_points, "period": 6.283185307179586},
        "initial": {"profile": "gaussian_bumps", "amplitude": 0.15, "width": 0.6, "centers": [0.0]},
        "stepper": {"t_end": t_end, "dt_initial": 2e-3},
        "output": {"snapshot_stride": 10, "write_field": True},
    }
    path.write_text(json.dumps(cfg, indent=2))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/decay_demo", help="run directory")
    ap.add_argument("--n", type=int, default=256, help="grid points")
    ap.add_argument("--t-end", type=float, default=0.5, help="final time")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg_path = out / "config.json"
    build_config(cfg_path, args.n, args.t_end)

    rc = muskat_main(["simulate", "--config", str(cfg_path), "--out", str(out)])
    if rc != 0:
        print(f"simulation exited with status code {rc}")
        return rc

    meta = json.loads((out / "meta.json").read_text())
    lines = (out / "series.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    first = dict(zip(header, map(float, lines[1].split(","))))
    last = dict(zip(header, map(float, lines[-1].split(","))))
    print(f"status: {meta['status']}")
    print(f"t: {first['t']:.4f} -> {last['t']:.4f}")
    print(f"|f|_Hr: {first['hnorm_f']:.6f} -> {last['hnorm_f']:.6f}")
    print(f"|h|_Hr: {first['hnorm_h']:.6f} -> {last['hnorm_h']:.6f}")
    print(f"gap:    {first['gap']:.6f} -> {last['gap']:.6f}")
    print(f"run directory: {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
