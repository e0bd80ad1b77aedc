"""Circumcenter extension of a boundary map: u_{x,y}, phi, F(x), M(x), K_x.

For fixed x the function y -> u_{x,y}(xi) satisfies the cocycle relation
u_{x,y}(xi) = u_{x,y0}(xi) + B(y0, y, f(xi)), so the solver evaluates the
metric derivative once at a base point y0 and moves y using Busemann values
only. The direct metric-derivative route is re-evaluated at the final center
and the gap between the two is reported as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, nnls

from .asymptotics import antipode, balance_point, busemann_value, ray
from .errors import PostCheckError
from .manifolds import BoundaryPoint, EuclideanPlane, HyperbolicPlane, Manifold, Point, TangentVector, angular_distance
from .manifolds.hyperbolic import angle_toward, ideal_from_angle
from .maps import BoundaryMap
from .moebius import BasePointGauge, PushforwardGauge, log_metric_derivative, log_metric_derivative_grid

DEFAULT_GRID = 256
DEFAULT_TOL = 1e-7
MAX_ITERATIONS = 10_000
PHI_CHECK_TOL = 1e-6
PHI_MAX_SHIFTS = 20


def _gauges(f: BoundaryMap, x: Point, y: Point):
    return PushforwardGauge(f, BasePointGauge(f.source, x)), BasePointGauge(f.target, y)


def u(x: Point, y: Point, xi: BoundaryPoint, f: BoundaryMap, pool=None) -> float:
    """u_{x,y}(xi): log of the metric derivative of f_* rho_x by rho_y at f(xi)."""
    num, den = _gauges(f, x, y)
    return log_metric_derivative(num, den, f(xi), pool)


def u_grid(x: Point, y: Point, angles, f: BoundaryMap, pool=None) -> np.ndarray:
    """u_{x,y} over an array of boundary angles of X."""
    num, den = _gauges(f, x, y)
    return log_metric_derivative_grid(num, den, f.apply(angles), pool)


def _busemann_many(model: Manifold, y0: Point, y: Point, angles: np.ndarray) -> np.ndarray:
    closed = model.busemann_closed_form(y0, y, angles)
    if closed is not None:
        return np.asarray(closed, float)
    return np.array([busemann_value(model, y0, y, BoundaryPoint(a)) for a in angles])


def _frame_dirs(model: Manifold, y: Point, angles: np.ndarray) -> np.ndarray:
    """Frame angles at y of the rays toward the given boundary angles of the model."""
    return np.array([model.frame_angle(model.ray_direction(y, a)) for a in angles])


def _frame_dirs_fast(model: Manifold, y: Point, angles: np.ndarray) -> np.ndarray:
    if isinstance(model, HyperbolicPlane):
        return np.asarray(angle_toward(y, *ideal_from_angle(angles)), float)
    if isinstance(model, EuclideanPlane):
        return np.asarray(angles, float)
    return _frame_dirs(model, y, angles)


# phi

def phi(v: TangentVector, f: BoundaryMap, pool=None) -> TangentVector:
    """Image of a unit vector of X under the geodesic-flow conjugacy induced by f."""
    X, Y = f.source, f.target
    fwd, bwd = BoundaryPoint(X.endpoint(v)), BoundaryPoint(X.endpoint(-v))
    anchor = balance_point(Y, Y.origin, f(bwd), f(fwd))
    # u decreases with unit slope along the line toward f(fwd); for Moebius maps one shift is exact,
    # otherwise the witness pair moves with the base point and a few corrections are needed
    s, w, check = 0.0, anchor, u(v.base, anchor.base, fwd, f, pool)
    for _ in range(PHI_MAX_SHIFTS):
        if abs(check) < 1e-12:
            break
        s += check
        w = Y.geodesic_flow(anchor, s)[1]
        check = u(v.base, w.base, fwd, f, pool)
    if not abs(check) < PHI_CHECK_TOL:
        raise PostCheckError(f"u at the foot point is {check:.3e}")
    return w


# convex hull certificate

@dataclass(frozen=True)
class HullCertificate:
    """Distance from 0 to the hull of unit directions, with convex weights realising it."""

    margin: float
    weights: np.ndarray
    largest_gap: float
    residual: float

    def as_dict(self) -> dict:
        return {
            "margin": self.margin,
            "largest_gap": self.largest_gap,
            "residual": self.residual,
            "weights": [float(w) for w in self.weights],
        }


def hull_certificate_angles(angles) -> HullCertificate:
    """Minimum-norm point of the convex hull of unit vectors at the given frame angles."""
    angles = np.mod(np.asarray(angles, float).ravel(), 2.0 * np.pi)
    if angles.size == 0:
        raise ValueError("need at least one direction")
    order = np.argsort(angles, kind="stable")
    srt = angles[order]
    gaps = np.diff(np.concatenate([srt, [srt[0] + 2.0 * np.pi]]))
    g = int(np.argmax(gaps))
    gap = float(gaps[g])
    E = np.vstack([np.cos(angles), np.sin(angles)])
    if gap <= np.pi + 1e-15:
        A = np.vstack([E, np.ones(angles.size)])
        w, _ = nnls(A, np.array([0.0, 0.0, 1.0]))
        w = w / w.sum()
        return HullCertificate(0.0, w, gap, float(np.linalg.norm(E @ w)))
    # all directions within an arc of width < pi: the closest hull point is the chord midpoint
    width = 2.0 * np.pi - gap
    w = np.zeros(angles.size)
    first, last = order[(g + 1) % angles.size], order[g]
    w[first] += 0.5
    w[last] += 0.5
    return HullCertificate(math.cos(width / 2.0), w, gap, float(np.linalg.norm(E @ w)))


def hull_certificate(model: Manifold, y: Point, dirs) -> HullCertificate:
    """Certificate for unit tangent vectors at y."""
    return hull_certificate_angles([model.frame_angle(d) for d in dirs])


# solver

@dataclass(frozen=True)
class CircumcenterResult:
    center: Point
    radius: float
    extremal_set: list
    extremal_u: np.ndarray
    certificate: HullCertificate
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return not self.diagnostics.get("flagged", False)

    def as_dict(self) -> dict:
        return {
            "center": [self.center.x, self.center.y],
            "radius": self.radius,
            "extremal_set": [[xi.angle, float(val)] for xi, val in zip(self.extremal_set, self.extremal_u)],
            "certificate": self.certificate.as_dict(),
            "diagnostics": self.diagnostics,
        }


class _Objective:
    """max_i u0_i + B(y0, y, eta_i) on a growing boundary grid."""

    def __init__(self, x: Point, f: BoundaryMap, y0: Point, angles: np.ndarray, pool):
        self.x, self.f, self.y0, self.pool = x, f, y0, pool
        self.Y = f.target
        self.angles = np.array([], float)
        self.images = np.array([], float)
        self.u0 = np.array([], float)
        self.evaluations = 0
        self.add(angles)

    def add(self, angles):
        angles = np.unique(np.mod(np.asarray(angles, float), 2.0 * np.pi))
        if self.angles.size:
            gap = angular_distance(angles[:, None], self.angles[None, :]).min(axis=1)
            angles = angles[gap > 1e-12]
        if angles.size == 0:
            return
        self.angles = np.concatenate([self.angles, angles])
        self.images = np.concatenate([self.images, self.f.apply(angles)])
        self.u0 = np.concatenate([self.u0, u_grid(self.x, self.y0, angles, self.f, self.pool)])

    def values(self, y: Point) -> np.ndarray:
        self.evaluations += 1
        return self.u0 + _busemann_many(self.Y, self.y0, y, self.images)

    def __call__(self, y: Point) -> float:
        return float(np.max(self.values(y)))


def _move(model: Manifold, y: Point, delta: np.ndarray) -> Point:
    n = float(np.hypot(*delta))
    if n == 0.0:
        return y
    return model.geodesic_flow(model.unit(y, math.atan2(delta[1], delta[0])), n)[0]


def _subgradient_phase(obj: _Objective, y: Point, step: float, tol: float, band: float, budget: int):
    Y = obj.Y
    vals = obj.values(y)
    m = float(vals.max())
    it = 0
    while it < budget and step > max(tol, 1e-3):
        it += 1
        soft = max(band, 0.1 * step)
        near = vals >= m - soft
        dirs = _frame_dirs_fast(Y, y, obj.images[near])
        mean = np.array([np.cos(dirs).mean(), np.sin(dirs).mean()])
        if np.hypot(*mean) < 1e-12:
            break
        cand = _move(Y, y, step * mean / np.hypot(*mean))
        cvals = obj.values(cand)
        if cvals.max() < m:
            y, vals, m = cand, cvals, float(cvals.max())
        else:
            step *= 0.5
    return y, step, it


def _polish(obj: _Objective, y: Point, radius: float, tol: float, band: float, budget: int):
    """Sequential linear programming on the minimax of the linearised u_i in normal coordinates."""
    Y = obj.Y
    it = 0
    last_step = radius
    vals = obj.values(y)
    m = float(vals.max())
    while it < budget:
        it += 1
        active = vals >= m - max(3.0 * radius, band)
        dirs = _frame_dirs_fast(Y, y, obj.images[active])
        E = np.column_stack([np.cos(dirs), np.sin(dirs)])
        A = np.column_stack([-E, -np.ones(len(dirs))])
        res = linprog(
            c=[0.0, 0.0, 1.0],
            A_ub=A,
            b_ub=-vals[active],
            bounds=[(-radius, radius), (-radius, radius), (None, None)],
            method="highs",
        )
        delta = res.x[:2] if res.success else np.zeros(2)
        predicted = res.fun if res.success else m
        size = float(np.hypot(*delta))
        if size < 1e-15 or predicted >= m - 1e-15:
            last_step = size
            if radius <= tol:
                break
            radius *= 0.25
            continue
        cand = _move(Y, y, delta)
        cvals = obj.values(cand)
        if cvals.max() < m:
            y, vals, m = cand, cvals, float(cvals.max())
            last_step = size
            if size < tol:
                break
        else:
            radius = 0.5 * size
            last_step = radius
            if radius < 0.1 * tol:
                break
    return y, last_step, it


def _extremal(vals: np.ndarray, band: float) -> np.ndarray:
    return np.flatnonzero(vals >= vals.max() - band)


def circumcenter(
    x: Point,
    f: BoundaryMap,
    grid_size: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    start: Point | None = None,
    pool=None,
    max_iterations: int = MAX_ITERATIONS,
) -> CircumcenterResult:
    """Minimise y -> max over a boundary grid of u_{x,y}, returning F(x), M(x) and K_x.

    The grid is uniform in the direction angle at the reference point of X,
    with one round of fourfold refinement around the provisional extremal set.
    The metric derivative is evaluated at the reference point of Y and carried
    to other points by the Busemann cocycle; ``start`` only moves the initial
    iterate.
    """
    Y = f.target
    y0 = start if start is not None else Y.origin
    Y.check(y0)
    band = max(10.0 * tol, 1e-5)
    grid = 2.0 * np.pi * np.arange(grid_size) / grid_size
    obj = _Objective(x, f, Y.origin, grid, pool)

    m0 = obj(y0)
    step0 = 0.5 * max(m0, 0.1)
    y, step, it1 = _subgradient_phase(obj, y0, step0, tol, band, max_iterations)
    y, last, it2 = _polish(obj, y, max(step, 1e-2), tol, band, max_iterations - it1)

    # one round of local refinement around the provisional extremal directions
    h = 2.0 * np.pi / grid_size
    vals = obj.values(y)
    if vals.max() > band:
        ext = obj.angles[_extremal(vals, max(band, 1e-2 * vals.max()))]
        offsets = h * np.arange(-4, 5) / 4.0
        obj.add((ext[:, None] + offsets[None, :]).ravel())
    y, last2, it3 = _polish(obj, y, max(last, 1e-3), tol, band, max_iterations - it1 - it2)
    iterations = it1 + it2 + it3

    # direct metric-derivative route at the final center, kept as a diagnostic
    direct = u_grid(x, y, obj.angles, f, pool)
    cocycle = obj.values(y)
    ks = _extremal(cocycle, band)
    ks = ks[np.argsort(np.mod(obj.angles[ks], 2.0 * np.pi), kind="stable")]
    dirs = _frame_dirs_fast(Y, y, obj.images[ks])
    cert = hull_certificate_angles(dirs)
    max_u, min_u = float(cocycle.max()), float(cocycle.min())
    flagged = not (cert.margin < tol and last2 < tol) and iterations >= max_iterations
    diagnostics = {
        "iterations": int(iterations),
        "final_step": float(last2),
        "grid_size": int(obj.angles.size),
        "max_u": max_u,
        "min_u": min_u,
        "direct_max_u": float(direct.max()),
        "cocycle_residual": float(np.max(np.abs(direct - cocycle))),
        "objective_evaluations": int(obj.evaluations),
        "extremal_band": band,
        "flagged": bool(flagged or not cert.margin < tol),
    }
    return CircumcenterResult(
        center=y,
        radius=max(max_u, 0.0),
        extremal_set=[BoundaryPoint(a) for a in obj.angles[ks]],
        extremal_u=cocycle[ks],
        certificate=cert,
        diagnostics=diagnostics,
    )


# post-processing checks

@dataclass(frozen=True)
class QIDefect:
    defect: float
    bound: float
    slack: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.bound + self.slack


def qi_defect(x: Point, x2: Point, f: BoundaryMap, r1: CircumcenterResult, r2: CircumcenterResult,
              slack: float = 1e-3) -> QIDefect:
    """|d_Y(F x, F x') - d_X(x, x')| against M(x) + M(x')."""
    dy = f.target.distance(r1.center, r2.center) if r1.center != r2.center else 0.0
    dx = f.source.distance(x, x2) if x != x2 else 0.0
    return QIDefect(abs(dy - dx), r1.radius + r2.radius, slack)


def extremal_antipode_check(result: CircumcenterResult, x: Point, f: BoundaryMap) -> float:
    """max over K_x of the angle between f(a_x(xi)) and a_{F(x)}(f(xi)), measured at the Y reference point."""
    worst = 0.0
    for xi in result.extremal_set:
        lhs = f(antipode(f.source, x, xi))
        rhs = antipode(f.target, result.center, f(xi))
        worst = max(worst, angular_distance(lhs.angle, rhs.angle))
    return worst


def antipodal_u_gap(result: CircumcenterResult, x: Point, f: BoundaryMap, pool=None) -> float:
    """max over K_x of |u(a_x(xi)) + M(x)|: the minimum of u sits at antipodes of maximisers."""
    angles = np.array([antipode(f.source, x, xi).angle for xi in result.extremal_set])
    if angles.size == 0:
        return 0.0
    vals = u_grid(x, result.center, angles, f, pool)
    return float(np.max(np.abs(vals + result.radius)))


def sup_u(x: Point, y: Point, f: BoundaryMap, grid_size: int = DEFAULT_GRID, pool=None) -> float:
    """max over a uniform boundary grid of u_{x,y}."""
    grid = 2.0 * np.pi * np.arange(grid_size) / grid_size
    return float(np.max(u_grid(x, y, grid, f, pool)))


def route_residual(x: Point, y: Point, xi: BoundaryPoint, f: BoundaryMap, pool=None) -> float:
    """|u via the metric derivative - B(foot(phi(ray(x, xi))), y, f(xi))|."""
    w = phi(ray(f.source, x, xi), f, pool)
    return abs(u(x, y, xi, f, pool) - busemann_value(f.target, w.base, y, f(xi)))
