"""Metric models of Hadamard surfaces."""

from .base import BOUNDARY_TOL, BoundaryPoint, Manifold, Point, TangentVector, angular_distance, wrap_angle
from .euclidean import EuclideanPlane
from .hyperbolic import HyperbolicPlane, Isometry
from .revolution import (
    Profile,
    SurfaceOfRevolution,
    constant_profile,
    example1_profile,
    example2_chart_x,
    example2_profile,
)

__all__ = [
    "BOUNDARY_TOL",
    "BoundaryPoint",
    "EuclideanPlane",
    "HyperbolicPlane",
    "Isometry",
    "Manifold",
    "Point",
    "Profile",
    "SurfaceOfRevolution",
    "TangentVector",
    "angular_distance",
    "constant_profile",
    "example1_profile",
    "example2_chart_x",
    "example2_profile",
    "wrap_angle",
]

