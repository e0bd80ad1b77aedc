"""The flat plane, used for degenerate checks (infinite Gromov products)."""

from __future__ import annotations

import math

import numpy as np

from ..errors import NotVisibleError
from .base import BOUNDARY_TOL, Manifold, Point, TangentVector, angular_distance


class EuclideanPlane(Manifold):
    name = "euclidean"

    def __init__(self):
        self.origin = Point(0.0, 0.0)

    def __repr__(self):
        return "EuclideanPlane()"

    def metric_coefficients(self, p: Point) -> tuple[float, float]:
        return 1.0, 1.0

    def curvature(self, p: Point) -> float:
        self.check(p)
        return 0.0

    def geodesic_flow(self, v: TangentVector, t: float) -> tuple[Point, TangentVector]:
        self.check(v.base)
        p = Point(v.base.x + t * v.dx, v.base.y + t * v.dy)
        return p, TangentVector(p, v.dx, v.dy, v.norm)

    def distance(self, p: Point, q: Point) -> float:
        self.check(p)
        self.check(q)
        return math.hypot(q.x - p.x, q.y - p.y)

    def connect(self, p: Point, q: Point) -> TangentVector:
        d = self.distance(p, q)
        if d == 0.0:
            raise ValueError("connect needs two distinct points")
        return TangentVector(p, (q.x - p.x) / d, (q.y - p.y) / d, 1.0)

    def ray_direction(self, x: Point, angle: float) -> TangentVector:
        return self.unit(x, angle)

    def endpoint(self, v: TangentVector) -> float:
        return self.frame_angle(v)

    def line(self, a: float, b: float) -> TangentVector:
        if angular_distance(a, b) < np.pi - BOUNDARY_TOL:
            raise NotVisibleError("only antipodal boundary pairs bound a line in the flat plane")
        return self.unit(self.origin, b)

    def busemann_closed_form(self, x: Point, y: Point, angles):
        angles = np.asarray(angles, float)
        return -((y.x - x.x) * np.cos(angles) + (y.y - x.y) * np.sin(angles))

    def gromov_closed_form(self, x: Point, a, b):
        antipodal = angular_distance(a, b) >= np.pi - BOUNDARY_TOL
        return np.where(antipodal, 0.0, np.inf)
