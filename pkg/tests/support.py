"""Shared test helpers for building random band-limited data and states."""

import numpy as np

from muskat import Grid, GridFunction, InterfaceState, PhysicalParams


def random_band_limited(grid: Grid, rng, scale: float = 1.0, max_mode: int = 4) -> GridFunction:
    """Smooth random function from a few low Fourier modes (zero mean)."""
    x = grid.nodes
    out = np.zeros_like(x)
    base = 2 * np.pi / grid.period
    for k in range(1, max_mode + 1):
        out += rng.normal() * np.cos(base * k * x) + rng.normal() * np.sin(base * k * x)
    return GridFunction(grid, scale * out / max_mode)


def random_state(grid: Grid, params: PhysicalParams, rng, scale: float = 0.1) -> InterfaceState:
    """Random admissible interface pair with amplitudes a fraction of c_inf."""
    f = random_band_limited(grid, rng, scale * params.c_inf)
    h = random_band_limited(grid, rng, scale * params.c_inf)
    X = InterfaceState(f, h, params)
    X.require_admissible()
    return X
