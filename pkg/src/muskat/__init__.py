"""Contour-integral simulator for a two-interface, three-phase porous-medium
(Muskat-type) flow on a periodic strip.

The interface pair X = (f, h) evolves by dX/dt = Phi(X), where Phi is built
from principal-value singular integrals on each interface plus smooth
cross-interface layer potentials.  The package also reconstructs the bulk
velocity and pressure fields, linearizes the evolution about the flat state,
and monitors runs for contact and norm blow-up.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .grid import (
    Grid,
    GridFunction,
    SobolevIndex,
    evaluate_interpolant,
    half_laplacian,
    hilbert_multiplier,
    high_mode_energy_fraction,
    l2_inner,
    l2_norm,
    sample_shifted,
    sobolev_norm,
    spectral_derivative,
)
from .state import AdmissibilityError, InterfaceState, PhysicalParams, admissibility_gap
from .singular import (
    DEFAULT_SCHEME,
    QuadratureScheme,
    apply_B,
    apply_B0,
    apply_Bcal,
    truncated_hilbert,
)
from .layers import (
    IdentityReport,
    LayerKind,
    LayerRequest,
    apply_layer,
    frechet_layer,
    identity_report,
    layer_operator,
)
from .rhs import compute_phi, two_phase_reduction
from .field import (
    FieldIdentityReport,
    FieldPoint,
    HolderProbeResult,
    HolderProbeSpec,
    VelocitySample,
    classify_point,
    field_identities_probe,
    holder_probe,
    pressure_at,
    pressure_constants,
    pressure_continuity_residual,
    velocity_at,
    velocity_trace,
    velocity_values,
)
from .linearize import (
    DispersionRow,
    SymbolMatrix,
    directional_derivative_fd,
    dispersion_scan,
    flat_symbol_matrix,
    offdiag_derivative,
)
from .evolve import (
    RunRecord,
    RunResult,
    SERIES_COLUMNS,
    SquirtDiagnosticSpec,
    SquirtReport,
    StepperConfig,
    cfl_limit,
    interface_distance,
    run,
    squirt_diagnostic,
    step,
)
from .config import (
    ConfigError,
    OutputConfig,
    RunConfig,
    build_initial_state,
    config_from_dict,
    load_config,
    write_config,
)

__all__ = [
    "__version__",
    # grid
    "Grid",
    "GridFunction",
    "SobolevIndex",
    "evaluate_interpolant",
    "half_laplacian",
    "hilbert_multiplier",
    "high_mode_energy_fraction",
    "l2_inner",
    "l2_norm",
    "sample_shifted",
    "sobolev_norm",
    "spectral_derivative",
    # state
    "AdmissibilityError",
    "InterfaceState",
    "PhysicalParams",
    "admissibility_gap",
    # singular
    "DEFAULT_SCHEME",
    "QuadratureScheme",
    "apply_B",
    "apply_B0",
    "apply_Bcal",
    "truncated_hilbert",
    # layers
    "IdentityReport",
    "LayerKind",
    "LayerRequest",
    "apply_layer",
    "frechet_layer",
    "identity_report",
    "layer_operator",
    # rhs
    "compute_phi",
    "two_phase_reduction",
    # field
    "FieldIdentityReport",
    "FieldPoint",
    "HolderProbeResult",
    "HolderProbeSpec",
    "VelocitySample",
    "classify_point",
    "field_identities_probe",
    "holder_probe",
    "pressure_at",
    "pressure_constants",
    "pressure_continuity_residual",
    "velocity_at",
    "velocity_trace",
    "velocity_values",
    # linearize
    "DispersionRow",
    "SymbolMatrix",
    "directional_derivative_fd",
    "dispersion_scan",
    "flat_symbol_matrix",
    "offdiag_derivative",
    # evolve
    "RunRecord",
    "RunResult",
    "SERIES_COLUMNS",
    "SquirtDiagnosticSpec",
    "SquirtReport",
    "StepperConfig",
    "cfl_limit",
    "interface_distance",
    "run",
    "squirt_diagnostic",
    "step",
    # config
    "ConfigError",
    "OutputConfig",
    "RunConfig",
    "build_initial_state",
    "config_from_dict",
    "load_config",
    "write_config",
]
