"""Figure rendering for run directories produced by the interface-flow simulator.

Consumes only the documented CSV/JSON artifacts (meta.json, series.csv,
snapshots/snap_*.csv, field_*.csv, dispersion.csv); never imports the
simulator.
"""

from .figures import ArtifactError, FigureSpec, KINDS, render

__version__ = "0.1.0"

__all__ = ["ArtifactError", "FigureSpec", "KINDS", "render", "__version__"]
