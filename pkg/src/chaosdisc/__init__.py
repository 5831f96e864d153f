"""Chaos-assisted discrimination of nearby qubit states with a nonlinear conformal map."""

__version__ = "0.1.0"

from .bloch import (
    SIGMA_X,
    ObservableAxis,
    ProjectiveQubit,
    QubitArray,
    SpherePoint,
    StatePair,
    fidelity,
    geodesic_distance,
    helstrom_error,
    infidelity,
    pair_at_delta,
    to_plane,
    to_state,
)
from .dynamics import MapParams, apply_map, fixed_points, iterate

__all__ = [
    "SIGMA_X",
    "MapParams",
    "ObservableAxis",
    "ProjectiveQubit",
    "QubitArray",
    "SpherePoint",
    "StatePair",
    "apply_map",
    "fidelity",
    "fixed_points",
    "geodesic_distance",
    "helstrom_error",
    "infidelity",
    "iterate",
    "pair_at_delta",
    "to_plane",
    "to_state",
]
