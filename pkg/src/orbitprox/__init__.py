"""Optimal bounds for the nodal distance between confocal Keplerian
trajectories, with a numerical orbit-distance engine to compare against."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundPieces,
    BoundReport,
    Plane,
    beta_curve_q,
    bounds,
    bounds_circular_q_e,
    bounds_circular_q_omega,
    bounds_q_e,
    bounds_q_omega,
    bounds_q_omega_prime,
    gamma_curve_q,
    gv2013_delta_e,
    gv2013_delta_omega,
)
from .elements import CometaryElements, MutualConfig, to_mutual  # noqa: E402
from .nodal import LinkingClass, classify, delta_components, delta_nod, nodal_distances  # noqa: E402

__all__ = [
    "BoundPieces",
    "BoundReport",
    "CometaryElements",
    "LinkingClass",
    "MutualConfig",
    "Plane",
    "beta_curve_q",
    "bounds",
    "bounds_circular_q_e",
    "bounds_circular_q_omega",
    "bounds_q_e",
    "bounds_q_omega",
    "bounds_q_omega_prime",
    "classify",
    "delta_components",
    "delta_nod",
    "gamma_curve_q",
    "gv2013_delta_e",
    "gv2013_delta_omega",
    "nodal_distances",
    "to_mutual",
]
