"""The hyperbolic plane of constant curvature -k^2 in the upper half-plane chart.

Everything is computed in the curvature -1 model and rescaled: lengths,
Busemann values and Gromov products are divided by k. Ideal points are carried
as projective pairs (p:q) standing for p/q on the real axis, so the point at
infinity needs no special case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NotVisibleError
from .base import Manifold, Point, TangentVector, wrap_angle


def _mobius(m: np.ndarray, z: complex) -> complex:
    a, b, c, d = m.ravel()
    den = c * z + d
    # a/c - 1/(c(cz+d)) keeps digits when z is huge
    if c != 0.0 and abs(c * z) > abs(d):
        return a / c - 1.0 / (c * den)
    return (a * z + b) / den


def _from_i(p: Point) -> np.ndarray:
    """SL(2,R) matrix taking i to p with positive real derivative."""
    r = math.sqrt(p.y)
    return np.array([[r, p.x / r], [0.0, 1.0 / r]])


def _rotation(phi: float) -> np.ndarray:
    """SL(2,R) matrix fixing i and turning tangent vectors there by ``phi``."""
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return np.array([[c, s], [-s, c]])


def ideal_from_angle(theta):
    """Projective coordinates (p, q) of the ideal point seen from i at frame angle ``theta``."""
    beta = np.pi / 4.0 - np.asarray(theta, float) / 2.0
    return np.cos(beta), np.sin(beta)


def angle_toward(p: Point, P, Q):
    """Frame angle at ``p`` of the direction pointing to the ideal point (P:Q)."""
    return wrap_angle(np.pi / 2.0 - 2.0 * np.arctan2(p.y * np.asarray(Q), np.asarray(P) - p.x * np.asarray(Q)))


def _hyperboloid(p: Point) -> np.ndarray:
    r2 = p.x * p.x + p.y * p.y
    return np.array([(r2 + 1.0) / (2.0 * p.y), p.x / p.y, (r2 - 1.0) / (2.0 * p.y)])


def _hyperboloid_tangent(p: Point, dx: float, dy: float) -> np.ndarray:
    x, y = p.x, p.y
    r2 = x * x + y * y
    common = (x * dx + y * dy) / y
    u = np.array(
        [
            common - (r2 + 1.0) * dy / (2.0 * y * y),
            dx / y - x * dy / (y * y),
            common - (r2 - 1.0) * dy / (2.0 * y * y),
        ]
    )
    return u / math.sqrt(_lorentz(u, u))


def _lorentz(a: np.ndarray, b: np.ndarray) -> float:
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


class HyperbolicPlane(Manifold):
    """Upper half-plane {y > 0} with metric (dx^2 + dy^2) / (k y)^2, curvature -k^2."""

    name = "hyperbolic"

    def __init__(self, curvature: float = -1.0):
        if not curvature < 0.0:
            raise ValueError(f"hyperbolic curvature must be negative, got {curvature}")
        self.kappa = float(curvature)
        self.k = math.sqrt(-self.kappa)
        self.origin = Point(0.0, 1.0)

    def __repr__(self):
        return f"HyperbolicPlane(curvature={self.kappa})"

    def describe(self) -> dict:
        return {"kind": self.name, "curvature": self.kappa}

    def contains(self, p: Point) -> bool:
        return math.isfinite(p.x) and math.isfinite(p.y) and p.y > 0.0

    def metric_coefficients(self, p: Point) -> tuple[float, float]:
        s = 1.0 / (self.k * p.y) ** 2
        return s, s

    def curvature(self, p: Point) -> float:
        self.check(p)
        return self.kappa

    def _frame_matrix(self, v: TangentVector) -> np.ndarray:
        return _from_i(v.base) @ _rotation(self.frame_angle(v) - np.pi / 2.0)

    def geodesic_flow(self, v: TangentVector, t: float) -> tuple[Point, TangentVector]:
        self.check(v.base)
        m = self._frame_matrix(v)
        w = 1j * math.exp(self.k * t)
        z = _mobius(m, w)
        c, d = m[1]
        vel = (1j * self.k * math.exp(self.k * t)) / (c * w + d) ** 2
        p = Point(z.real, z.imag)
        return p, self.vector(p, vel.real, vel.imag)

    def distance(self, p: Point, q: Point) -> float:
        self.check(p)
        self.check(q)
        chord = math.hypot(p.x - q.x, p.y - q.y)
        return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.y * q.y))) / self.k

    def connect(self, p: Point, q: Point) -> TangentVector:
        self.check(p)
        self.check(q)
        if p == q:
            raise ValueError("connect needs two distinct points")
        w = complex((q.x - p.x) / p.y, q.y / p.y)
        disc = (w - 1j) / (w + 1j)
        return self.unit(p, math.atan2(disc.imag, disc.real) + np.pi / 2.0)

    # hyperboloid evaluation keeps far ray points accurate

    def _ray_point(self, v: TangentVector, t: float) -> np.ndarray:
        X = _hyperboloid(v.base)
        U = _hyperboloid_tangent(v.base, v.dx, v.dy)
        kt = self.k * t
        return math.cosh(kt) * X + math.sinh(kt) * U

    def _hyperboloid_distance(self, A: np.ndarray, B: np.ndarray) -> float:
        z = -_lorentz(A, B)
        return math.acosh(max(z, 1.0)) / self.k

    def point_ray_distance(self, p: Point, v: TangentVector, t: float) -> float:
        return self._hyperboloid_distance(_hyperboloid(p), self._ray_point(v, t))

    def ray_separation(self, v: TangentVector, w: TangentVector, t: float) -> float:
        return self._hyperboloid_distance(self._ray_point(v, t), self._ray_point(w, t))

    # boundary

    def ray_direction(self, x: Point, angle: float) -> TangentVector:
        self.check(x)
        P, Q = ideal_from_angle(angle)
        return self.unit(x, float(angle_toward(x, P, Q)))

    def endpoint(self, v: TangentVector) -> float:
        m = self._frame_matrix(v)
        return float(angle_toward(self.origin, m[0, 0], m[1, 0]))

    def line(self, a: float, b: float) -> TangentVector:
        p1, q1 = ideal_from_angle(a)
        p2, q2 = ideal_from_angle(b)
        det = p2 * q1 - p1 * q2
        if abs(det) < 1e-15:
            raise NotVisibleError("a geodesic needs two distinct ideal endpoints")
        if det < 0.0:
            p1, q1, det = -p1, -q1, -det
        r = math.sqrt(det)
        m = np.array([[p2, p1], [q2, q1]]) / r
        z = _mobius(m, 1j)
        vel = 1j * self.k / (m[1, 0] * 1j + m[1, 1]) ** 2
        p = Point(z.real, z.imag)
        return self.vector(p, vel.real, vel.imag)

    def busemann_closed_form(self, x: Point, y: Point, angles):
        P, Q = ideal_from_angle(angles)
        num = x.y * ((P - y.x * Q) ** 2 + (y.y * Q) ** 2)
        den = y.y * ((P - x.x * Q) ** 2 + (x.y * Q) ** 2)
        return np.log(num / den) / self.k

    def gromov_closed_form(self, x: Point, a, b):
        ta = angle_toward(x, *ideal_from_angle(a))
        tb = angle_toward(x, *ideal_from_angle(b))
        with np.errstate(divide="ignore"):
            return -np.log(np.abs(np.sin((ta - tb) / 2.0))) / self.k


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving isometry of the half-plane, z -> (az+b)/(cz+d) with ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_matrix(cls, m) -> Isometry:
        m = np.asarray(m, float)
        det = float(np.linalg.det(m))
        if det <= 0.0:
            raise ValueError("isometry matrix must have positive determinant")
        m = m / math.sqrt(det)
        return cls(*map(float, m.ravel()))

    @classmethod
    def from_point_rotation(cls, p: Point, phi: float) -> Isometry:
        """The isometry sending i to ``p`` after turning the tangent plane at i by ``phi``."""
        return cls.from_matrix(_from_i(p) @ _rotation(phi))

    @classmethod
    def random(cls, rng: np.random.Generator, spread: float = 1.0) -> Isometry:
        x = rng.uniform(-spread, spread)
        y = math.exp(rng.uniform(-spread, spread))
        return cls.from_point_rotation(Point(x, y), rng.uniform(0.0, 2.0 * np.pi))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def inverse(self) -> Isometry:
        return Isometry(self.d, -self.b, -self.c, self.a)

    def compose(self, other: Isometry) -> Isometry:
        """self after other."""
        return Isometry.from_matrix(self.matrix @ other.matrix)

    def apply(self, p: Point) -> Point:
        z = _mobius(self.matrix, complex(p.x, p.y))
        return Point(z.real, z.imag)

    def differential(self, model: HyperbolicPlane, v: TangentVector) -> TangentVector:
        z = complex(v.base.x, v.base.y)
        w = complex(v.dx, v.dy) / (self.c * z + self.d) ** 2
        return model.vector(self.apply(v.base), w.real, w.imag)

    def boundary(self, model: HyperbolicPlane, angles):
        """Image of boundary angles (at the origin of ``model``)."""
        P, Q = ideal_from_angle(angles)
        return angle_toward(model.origin, self.a * P + self.b * Q, self.c * P + self.d * Q)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}
