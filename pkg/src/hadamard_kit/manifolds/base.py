"""Shared value types and the abstract interface of a Hadamard surface model."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import ChartDomainError, NotVisibleError, ShootingError

#: Two boundary directions closer than this (radians, at the reference point) are equal.
BOUNDARY_TOL = 1e-8


def wrap_angle(theta):
    """Map an angle (or array of angles) into [0, 2*pi)."""
    return np.mod(theta, 2.0 * np.pi)


def angular_distance(a, b):
    """Unsigned angular distance in [0, pi]; vectorised."""
    d = np.abs(np.mod(np.asarray(a, float) - np.asarray(b, float) + np.pi, 2.0 * np.pi) - np.pi)
    return float(d) if np.ndim(d) == 0 else d


@dataclass(frozen=True)
class Point:
    """Chart coordinates of a point on a 2-D model."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector in chart components with its Riemannian norm cached.

    Build these through :meth:`Manifold.vector` or :meth:`Manifold.unit` so that
    the cached norm is computed from the owning metric.
    """

    base: Point
    dx: float
    dy: float
    norm: float

    @property
    def components(self) -> np.ndarray:
        return np.array([self.dx, self.dy])

    def __neg__(self) -> TangentVector:
        return TangentVector(self.base, -self.dx, -self.dy, self.norm)

    def scaled(self, c: float) -> TangentVector:
        return TangentVector(self.base, c * self.dx, c * self.dy, abs(c) * self.norm)


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A point of the visual boundary, stored as a direction angle at the model's reference point.

    Equality is tolerant: two boundary points compare equal when their
    directions at the reference point differ by less than ``BOUNDARY_TOL``.
    """

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(wrap_angle(self.angle)))

    def __eq__(self, other):
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        return angular_distance(self.angle, other.angle) < BOUNDARY_TOL

    __hash__ = None

    def direction(self, model: Manifold) -> TangentVector:
        return model.unit(model.origin, self.angle)


class Manifold(ABC):
    """A complete, simply connected surface in one global chart with a diagonal metric.

    Subclasses supply the metric, the geodesic flow, distance and the shooting
    map ``connect``. Boundary hooks (``ray_direction``, ``endpoint``) have generic
    implementations by long-range retargeting; models with closed forms
    override them, as well as the optional closed-form Busemann and Gromov hooks.
    """

    name: str = "manifold"
    origin: Point

    # chart and metric

    def contains(self, p: Point) -> bool:
        return math.isfinite(p.x) and math.isfinite(p.y)

    def check(self, p: Point) -> None:
        if not self.contains(p):
            raise ChartDomainError(f"{p} lies outside the chart of {self.name}")

    @abstractmethod
    def metric_coefficients(self, p: Point) -> tuple[float, float]:
        """Diagonal metric entries (g11, g22) at ``p``."""

    def norm_of(self, p: Point, dx: float, dy: float) -> float:
        self.check(p)
        g11, g22 = self.metric_coefficients(p)
        return math.sqrt(g11 * dx * dx + g22 * dy * dy)

    def vector(self, p: Point, dx: float, dy: float) -> TangentVector:
        return TangentVector(p, float(dx), float(dy), self.norm_of(p, dx, dy))

    def metric_norm(self, v: TangentVector) -> float:
        return self.norm_of(v.base, v.dx, v.dy)

    def inner(self, v: TangentVector, w: TangentVector) -> float:
        g11, g22 = self.metric_coefficients(v.base)
        return g11 * v.dx * w.dx + g22 * v.dy * w.dy

    def normalize(self, v: TangentVector) -> TangentVector:
        n = self.metric_norm(v)
        if n == 0.0:
            raise ValueError("cannot normalise the zero vector")
        return self.vector(v.base, v.dx / n, v.dy / n)

    def unit(self, p: Point, angle: float) -> TangentVector:
        """Unit vector at ``p`` making ``angle`` with the first orthonormal frame vector."""
        self.check(p)
        g11, g22 = self.metric_coefficients(p)
        return TangentVector(p, math.cos(angle) / math.sqrt(g11), math.sin(angle) / math.sqrt(g22), 1.0)

    def frame_angle(self, v: TangentVector) -> float:
        g11, g22 = self.metric_coefficients(v.base)
        return float(wrap_angle(math.atan2(math.sqrt(g22) * v.dy, math.sqrt(g11) * v.dx)))

    def angle_between(self, v: TangentVector, w: TangentVector) -> float:
        c = self.inner(v, w) / (self.metric_norm(v) * self.metric_norm(w))
        return math.acos(min(1.0, max(-1.0, c)))

    # geodesics

    @abstractmethod
    def geodesic_flow(self, v: TangentVector, t: float) -> tuple[Point, TangentVector]:
        """Position and velocity at time ``t`` of the unit-speed geodesic with initial velocity ``v``."""

    @abstractmethod
    def distance(self, p: Point, q: Point) -> float: ...

    @abstractmethod
    def connect(self, p: Point, q: Point) -> TangentVector:
        """Unit initial velocity of the geodesic segment from ``p`` to ``q``."""

    @abstractmethod
    def curvature(self, p: Point) -> float: ...

    def point_ray_distance(self, p: Point, v: TangentVector, t: float) -> float:
        """d(p, gamma_v(t)); models override this when far points lose precision in the chart."""
        return self.distance(p, self.geodesic_flow(v, t)[0])

    def ray_separation(self, v: TangentVector, w: TangentVector, t: float) -> float:
        """d(gamma_v(t), gamma_w(t))."""
        return self.distance(self.geodesic_flow(v, t)[0], self.geodesic_flow(w, t)[0])

    # boundary hooks

    def ray_direction(self, x: Point, angle: float) -> TangentVector:
        """Unit vector at ``x`` asymptotic to the ray from the origin with frame angle ``angle``.

        Generic version: aim at ever farther points of the origin ray until the
        launch angle stops moving.
        """
        self.check(x)
        v0 = self.unit(self.origin, angle)
        if x == self.origin:
            return v0
        prev = None
        T = 10.0
        for _ in range(8):
            w = self.connect(x, self.geodesic_flow(v0, T)[0])
            a = self.frame_angle(w)
            if prev is not None and angular_distance(a, prev) < 1e-10:
                return w
            prev, T = a, 2.0 * T
        raise ShootingError("ray retargeting did not settle", angular_distance(a, prev))

    def endpoint(self, v: TangentVector) -> float:
        """Angle at the origin of the boundary point the forward ray of ``v`` tends to."""
        v = self.normalize(v)
        if v.base == self.origin:
            return self.frame_angle(v)
        prev = None
        T = 10.0
        for _ in range(8):
            a = self.frame_angle(self.connect(self.origin, self.geodesic_flow(v, T)[0]))
            if prev is not None and angular_distance(a, prev) < 1e-10:
                return a
            prev, T = a, 2.0 * T
        raise ShootingError("endpoint retargeting did not settle", angular_distance(a, prev))

    def line(self, a: float, b: float) -> TangentVector:
        """Unit velocity at some point of a bi-infinite geodesic running from boundary angle ``a`` to ``b``."""
        raise NotVisibleError(f"{self.name} provides no bi-infinite geodesic constructor")

    def busemann_closed_form(self, x: Point, y: Point, angles):
        """Vectorised exact Busemann values, or ``None`` if the model has no closed form."""
        return None

    def gromov_closed_form(self, x: Point, a, b):
        """Vectorised exact Gromov products of boundary angles, or ``None``."""
        return None

    def describe(self) -> dict:
        return {"kind": self.name}
