"""Boundary points, rays, Busemann functions, Gromov products and comparison angles.

Limits along rays are truncated at doubling times. A Gromov-product iterate is
declared divergent when it keeps growing and either exceeds the divergence
threshold or its increments stop shrinking; otherwise the last iterate is
reported together with its last increment as a residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InconsistentInputError, NotVisibleError
from .manifolds import BoundaryPoint, Manifold, Point, TangentVector

TRUNCATION_TIMES = (5.0, 10.0, 20.0, 40.0, 80.0)
CONVERGENCE_TOL = 1e-6
DIVERGENCE_THRESHOLD = 50.0
# increments at least this fraction of the previous one count as "not shrinking"
STALL_RATIO = 0.9
# slack for the per-evaluation monotonicity assertion
MONOTONE_SLACK = 1e-7
HOROBALL_BRACKET = 1e3


@dataclass(frozen=True)
class LimitSettings:
    times: tuple[float, ...] = TRUNCATION_TIMES
    tol: float = CONVERGENCE_TOL
    divergence_threshold: float = DIVERGENCE_THRESHOLD
    stall_ratio: float = STALL_RATIO


DEFAULT_LIMITS = LimitSettings()


@dataclass(frozen=True)
class LimitValue:
    """A limit along a ray, truncated at ``truncation_time``.

    ``value`` is ``math.inf`` when ``divergent`` is set. ``residual`` is the
    last doubling increment (or, for closed-form values, the larger of that
    and the gap between the closed form and the last iterate).
    """

    value: float
    divergent: bool
    converged: bool
    truncation_time: float
    residual: float
    iterates: tuple[float, ...] = ()
    times: tuple[float, ...] = ()
    monotone: bool = True
    method: str = "truncated"

    def __float__(self):
        return float(self.value)

    @property
    def finite(self) -> bool:
        return not self.divergent

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "divergent": self.divergent,
            "converged": self.converged,
            "truncation_time": self.truncation_time,
            "residual": self.residual,
            "iterates": list(self.iterates),
            "monotone": self.monotone,
            "method": self.method,
        }


def _increasing_ok(vals, slack=MONOTONE_SLACK) -> bool:
    return all(b >= a - slack * (1.0 + abs(a)) for a, b in zip(vals, vals[1:]))


def classify_growth(times, iterates, settings: LimitSettings = DEFAULT_LIMITS) -> LimitValue:
    """Turn a non-decreasing sequence of iterates into a finite value or a divergence flag."""
    times, iterates = tuple(map(float, times)), tuple(map(float, iterates))
    inc = np.diff(iterates)
    last = float(inc[-1]) if inc.size else 0.0
    monotone = _increasing_ok(iterates)
    common = dict(truncation_time=times[-1], iterates=iterates, times=times, monotone=monotone)
    if abs(last) < settings.tol:
        return LimitValue(iterates[-1], False, True, residual=abs(last), **common)
    growing = last > settings.tol
    stalled = inc.size >= 2 and inc[-2] > 0.0 and last >= settings.stall_ratio * inc[-2]
    if growing and (iterates[-1] > settings.divergence_threshold or stalled):
        return LimitValue(math.inf, True, False, residual=last, **common)
    return LimitValue(iterates[-1], False, False, residual=abs(last), **common)


def boundary_point(model: Manifold, v: TangentVector) -> BoundaryPoint:
    """The boundary point the forward ray of ``v`` converges to."""
    return BoundaryPoint(model.endpoint(v))


def ray(model: Manifold, x: Point, xi: BoundaryPoint) -> TangentVector:
    """Unit vector at ``x`` whose ray is asymptotic to ``xi``."""
    return model.ray_direction(x, xi.angle)


def busemann(
    model: Manifold, x: Point, y: Point, xi: BoundaryPoint, settings: LimitSettings = DEFAULT_LIMITS
) -> LimitValue:
    """B(x, y, xi) = lim d(y, xi_x(t)) - t, with the closed form used where the model has one."""
    if x == y:
        model.check(x)
        return LimitValue(0.0, False, True, 0.0, 0.0, method="exact")
    v = ray(model, x, xi)
    its = tuple(model.point_ray_distance(y, v, T) - T for T in settings.times)
    monotone = _increasing_ok(tuple(-b for b in its))
    last = abs(its[-1] - its[-2]) if len(its) > 1 else 0.0
    closed = model.busemann_closed_form(x, y, xi.angle)
    if closed is not None:
        closed = float(closed)
        return LimitValue(
            closed, False, True, settings.times[-1], max(last, abs(closed - its[-1])), its, settings.times,
            monotone, "closed-form",
        )
    return LimitValue(its[-1], False, last < settings.tol, settings.times[-1], last, its, settings.times, monotone)


def busemann_value(model: Manifold, x: Point, y: Point, xi: BoundaryPoint) -> float:
    """Fast scalar Busemann value: closed form when available, else the truncated limit."""
    closed = model.busemann_closed_form(x, y, xi.angle)
    if closed is not None:
        return float(closed)
    return busemann(model, x, y, xi).value


def gromov_product(
    model: Manifold, x: Point, xi: BoundaryPoint, eta: BoundaryPoint, settings: LimitSettings = DEFAULT_LIMITS
) -> LimitValue:
    """(xi|eta)_x as the limit of t - d(xi_x(t), eta_x(t))/2."""
    if xi == eta:
        return LimitValue(math.inf, True, False, 0.0, 0.0, method="coincident")
    v, w = ray(model, x, xi), ray(model, x, eta)
    its = [T - 0.5 * model.ray_separation(v, w, T) for T in settings.times]
    return classify_growth(settings.times, its, settings)


def line_through(model: Manifold, xi: BoundaryPoint, eta: BoundaryPoint) -> TangentVector:
    """A unit vector on a bi-infinite geodesic from ``xi`` to ``eta``."""
    return model.line(xi.angle, eta.angle)


def balance_point(model: Manifold, x: Point, xi: BoundaryPoint, eta: BoundaryPoint) -> TangentVector:
    """Point of the geodesic (xi, eta) on which B(x, ., xi) = B(x, ., eta), with the velocity toward eta."""
    v = line_through(model, xi, eta)

    def gap(t):
        p = model.geodesic_flow(v, t)[0]
        return busemann_value(model, x, p, xi) - busemann_value(model, x, p, eta)

    lo, hi = -1.0, 1.0
    g_lo, g_hi = gap(lo), gap(hi)
    while not (g_lo <= 0.0 <= g_hi):
        if max(-lo, hi) >= HOROBALL_BRACKET:
            raise NotVisibleError("no sign change of the horoball gap within the bracket")
        if g_lo > 0.0:
            lo *= 2.0
            g_lo = gap(lo)
        if g_hi < 0.0:
            hi *= 2.0
            g_hi = gap(hi)
    t = brentq(gap, lo, hi, xtol=1e-14, rtol=1e-15) if g_lo < 0.0 < g_hi else (lo if g_lo == 0.0 else hi)
    return model.geodesic_flow(v, t)[1]


def gromov_product_horoball(model: Manifold, x: Point, xi: BoundaryPoint, eta: BoundaryPoint) -> float:
    """(xi|eta)_x through the balance point of the horoballs at xi and eta."""
    p = balance_point(model, x, xi, eta).base
    return -busemann_value(model, x, p, xi)


def comparison_angle(model: Manifold, x: Point, y: Point, xi: BoundaryPoint, k: float = 1.0) -> float:
    """Angle at x of the comparison triangle (x, y, xi) in the plane of curvature -k^2."""
    if k < 0.0:
        raise ValueError("k must be nonnegative")
    d = model.distance(x, y)
    if d == 0.0:
        raise ValueError("comparison angle needs x != y")
    B = busemann_value(model, x, y, xi)
    if k > 0.0:
        c = (math.cosh(k * d) - math.exp(k * B)) / math.sinh(k * d)
    else:
        c = -B / d
    if abs(c) > 1.0 + 1e-9:
        raise InconsistentInputError(f"cosine {c:.12g} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, c)))


def antipode(model: Manifold, x: Point, xi: BoundaryPoint) -> BoundaryPoint:
    """Endpoint of the ray from x opposite to the ray toward xi."""
    return boundary_point(model, -ray(model, x, xi))


def interior_gromov(model: Manifold, x: Point, y: Point, z: Point) -> float:
    return 0.5 * (model.distance(x, y) + model.distance(x, z) - model.distance(y, z))
