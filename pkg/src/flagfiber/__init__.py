"""Numerical geometry of the bundle of (projection, unit vector) pairs.

Modules:
    operator_core -- dense complex-matrix kernels and decompositions
    bundle        -- points, tangent vectors, the unitary action and charts
    finsler       -- quotient operator norm, minimal liftings, geodesics
    riemann       -- quotient/ambient Riemannian metrics, exp/log, curvature
    cli           -- batch verification and computation front-end
"""

from . import bundle, cli, finsler, operator_core, riemann
from .bundle import BundlePoint, TangentVector, validate_point, validate_tangent
from .finsler import MinimalLifting, finsler_norm, minimal_lifting
from .riemann import HorizontalVector, exp_map, log_map

__version__ = "0.1.0"

__all__ = [
    "bundle",
    "cli",
    "finsler",
    "operator_core",
    "riemann",
    "BundlePoint",
    "TangentVector",
    "validate_point",
    "validate_tangent",
    "MinimalLifting",
    "finsler_norm",
    "minimal_lifting",
    "HorizontalVector",
    "exp_map",
    "log_map",
]
