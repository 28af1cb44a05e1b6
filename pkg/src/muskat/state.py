"""Physical parameters and the interface pair X = (f, h)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridFunction


class AdmissibilityError(ValueError):
    """Raised when the interfaces touch or cross: min(c_inf + f - h) <= 0."""


@dataclass(frozen=True)
class PhysicalParams:
    """Permeability, viscosity, gravity, the three densities and the separation c_inf.

    The density ordering rho1 < rho2 <= rho3 (stable stratification) makes the
    derived mobility constants theta1 < 0 and theta2 <= 0; the degenerate case
    rho2 = rho3 collapses the lower interface dynamics (two-phase reduction).
    """

    permeability: float = 1.0
    viscosity: float = 1.0
    gravity: float = 1.0
    rho1: float = 1.0
    rho2: float = 2.0
    rho3: float = 3.0
    c_inf: float = 1.0

    def __post_init__(self):
        if min(self.permeability, self.viscosity, self.gravity) <= 0:
            raise ValueError("permeability, viscosity and gravity must be positive")
        if not (self.rho1 < self.rho2 <= self.rho3):
            raise ValueError("densities must satisfy rho1 < rho2 <= rho3")
        if self.c_inf <= 0:
            raise ValueError("c_inf must be positive")

    @property
    def theta1(self) -> float:
        return self.permeability * self.gravity * (self.rho1 - self.rho2) / (2 * self.viscosity)

    @property
    def theta2(self) -> float:
        return self.permeability * self.gravity * (self.rho2 - self.rho3) / (2 * self.viscosity)

    @classmethod
    def from_thetas(cls, theta1: float, theta2: float, c_inf: float = 1.0) -> "PhysicalParams":
        """Convenience constructor with k = g = 1, mu = 1 and densities chosen to
        realize the given (negative) theta1, theta2."""
        if theta1 >= 0 or theta2 > 0:
            raise ValueError("stable stratification requires theta1 < 0 and theta2 <= 0")
        rho1 = 1.0
        rho2 = rho1 - 2 * theta1
        rho3 = rho2 - 2 * theta2
        return cls(rho1=rho1, rho2=rho2, rho3=rho3, c_inf=c_inf)


class InterfaceState:
    """Pair X = (f, h) on a shared grid with the physical parameters attached."""

    __slots__ = ("f", "h", "params")

    def __init__(self, f: GridFunction, h: GridFunction, params: PhysicalParams):
        f.same_grid(h)
        self.f = f
        self.h = h
        self.params = params

    @property
    def grid(self) -> Grid:
        return self.f.grid

    @classmethod
    def flat(cls, grid: Grid, params: PhysicalParams) -> "InterfaceState":
        return cls(GridFunction.zeros(grid), GridFunction.zeros(grid), params)

    def gap_values(self) -> np.ndarray:
        return self.params.c_inf + self.f.values - self.h.values

    def is_admissible(self) -> bool:
        return bool(np.min(self.gap_values()) > 0)

    def require_admissible(self) -> None:
        gaps = self.gap_values()
        i = int(np.argmin(gaps))
        if gaps[i] <= 0:
            x = self.grid.nodes[i]
            raise AdmissibilityError(
                f"interfaces touch or cross: gap {gaps[i]:.3e} at node {i} (x = {x:.4f})"
            )

    def perturbed(self, df: np.ndarray | float = 0.0, dh: np.ndarray | float = 0.0) -> "InterfaceState":
        return InterfaceState(
            GridFunction(self.grid, self.f.values + df),
            GridFunction(self.grid, self.h.values + dh),
            self.params,
        )


def admissibility_gap(state: InterfaceState) -> float:
    """Minimum pointwise vertical gap c_inf + f - h over the grid nodes."""
    return float(np.min(state.gap_values()))
