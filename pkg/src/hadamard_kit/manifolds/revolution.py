"""Warped-product surfaces dx^2 + f(x)^2 dy^2 with ODE geodesics and shooting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..errors import ChartDomainError, IntegrationError, ShootingError
from .base import Manifold, Point, TangentVector


@dataclass(frozen=True)
class Profile:
    """Warping function f with its first two derivatives on the domain [x_min, inf)."""

    name: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    d2f: Callable[[float], float]
    x_min: float = -math.inf
    base_point: Point = Point(0.0, 0.0)
    params: dict = field(default_factory=dict)


def constant_profile(c: float = 2.0) -> Profile:
    """f identically ``c``: a flat cylinder-free test stub (the chart is the whole plane)."""
    if c <= 0.0:
        raise ValueError("profile constant must be positive")
    return Profile("constant", lambda x: c, lambda x: 0.0, lambda x: 0.0, params={"c": c})


def example1_profile(x_min: float = 1e-2) -> Profile:
    """f(x) = e^x / sqrt(e^{2x} - 1) on x > 0, curvature -> 0 at infinity but finite Gromov products."""
    if x_min <= 0.0:
        raise ValueError("example-1 profile is only defined for x > 0")

    def f(x):
        return (1.0 - math.exp(-2.0 * x)) ** -0.5

    def df(x):
        u = math.exp(-2.0 * x)
        return -u * (1.0 - u) ** -1.5

    def d2f(x):
        u = math.exp(-2.0 * x)
        return 2.0 * u * (1.0 - u) ** -1.5 + 3.0 * u * u * (1.0 - u) ** -2.5

    return Profile("example1", f, df, d2f, x_min, Point(math.log(2.0), 0.0), {"x_min": x_min})


def example2_chart_x(alpha: float, t: float) -> float:
    """Chart coordinate x of the parameter value t (x = t^(1-alpha) / (1-alpha))."""
    return t ** (1.0 - alpha) / (1.0 - alpha)


def example2_profile(alpha: float = 0.25, x_min: float | None = None) -> Profile:
    """f(x) = (1 - tau x^(-beta))^(-1/2) with beta = 2 alpha/(1-alpha), tau = (1-alpha)^(-beta).

    The profile blows up at x = 1/(1-alpha) (parameter t = 1). Unless given,
    x_min is placed at parameter t = 1.01; the default base point sits at t = 2.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    beta = 2.0 * alpha / (1.0 - alpha)
    tau = (1.0 - alpha) ** (-beta)
    singular = 1.0 / (1.0 - alpha)
    if x_min is None:
        x_min = example2_chart_x(alpha, 1.01)
    if x_min <= singular:
        raise ValueError(f"x_min must exceed the singular point {singular}")

    def w_terms(x):
        w = tau * x ** (-beta)
        return w, -beta * w / x, beta * (beta + 1.0) * w / (x * x)

    def f(x):
        return (1.0 - tau * x ** (-beta)) ** -0.5

    def df(x):
        w, w1, _ = w_terms(x)
        return 0.5 * (1.0 - w) ** -1.5 * w1

    def d2f(x):
        w, w1, w2 = w_terms(x)
        return 0.75 * (1.0 - w) ** -2.5 * w1 * w1 + 0.5 * (1.0 - w) ** -1.5 * w2

    base = Point(example2_chart_x(alpha, 2.0), 0.0)
    return Profile("example2", f, df, d2f, x_min, base, {"alpha": alpha, "x_min": x_min})


class SurfaceOfRevolution(Manifold):
    """Surface with metric dx^2 + f(x)^2 dy^2 on {x >= x_min}.

    Geodesics are integrated with an adaptive 8th-order Dormand-Prince scheme;
    distances and connecting vectors come from shooting on the launch angle.
    """

    name = "revolution"

    def __init__(
        self,
        profile: Profile,
        origin: Point | None = None,
        rtol: float = 1e-11,
        atol: float = 1e-12,
        shoot_tol: float = 1e-8,
        max_shoot: int = 200,
    ):
        self.profile = profile
        self.origin = origin if origin is not None else profile.base_point
        self.rtol, self.atol = rtol, atol
        self.shoot_tol, self.max_shoot = shoot_tol, max_shoot
        self.check(self.origin)

    def __repr__(self):
        return f"SurfaceOfRevolution({self.profile.name}, {self.profile.params})"

    def describe(self) -> dict:
        return {"kind": self.name, "profile": self.profile.name, **self.profile.params}

    def contains(self, p: Point) -> bool:
        return math.isfinite(p.x) and math.isfinite(p.y) and p.x >= self.profile.x_min

    def metric_coefficients(self, p: Point) -> tuple[float, float]:
        return 1.0, self.profile.f(p.x) ** 2

    def curvature(self, p: Point) -> float:
        self.check(p)
        return -self.profile.d2f(p.x) / self.profile.f(p.x)

    def clairaut_constant(self, v: TangentVector) -> float:
        return self.profile.f(v.base.x) ** 2 * v.dy

    # integration

    def _rhs(self, t, s):
        x, _, vx, vy = s
        # trial stages may probe past the chart edge; such trajectories are discarded by the domain event
        x = max(x, self.profile.x_min)
        F, D = self.profile.f(x), self.profile.df(x)
        return [vx, vy, F * D * vy * vy, -2.0 * D / F * vx * vy]

    def _domain_event(self):
        x_min = self.profile.x_min

        def leave(t, s):
            return s[0] - x_min

        leave.terminal = True
        leave.direction = -1
        return leave

    def _integrate(self, v: TangentVector, t_end: float, events=()):
        evs = list(events)
        if math.isfinite(self.profile.x_min):
            evs.append(self._domain_event())
        s0 = [v.base.x, v.base.y, v.dx, v.dy]
        sol = solve_ivp(
            self._rhs, (0.0, t_end), s0, method="DOP853", rtol=self.rtol, atol=self.atol, events=evs or None
        )
        if sol.status == -1:
            raise IntegrationError(sol.message)
        return sol

    def geodesic_flow(self, v: TangentVector, t: float) -> tuple[Point, TangentVector]:
        self.check(v.base)
        if t == 0.0:
            return v.base, v
        if t < 0.0:
            p, w = self.geodesic_flow(-v, -t)
            return p, -w
        sol = self._integrate(v, t)
        if sol.status == 1:
            raise ChartDomainError(f"geodesic left x >= {self.profile.x_min} at t={sol.t[-1]:.6g}")
        x, y, vx, vy = sol.y[:, -1]
        p = Point(float(x), float(y))
        return p, self.vector(p, vx, vy)

    # shooting

    def _crossing(self, p: Point, launch: float, q: Point, t_cap: float):
        """Signed x-offset from q where the geodesic launched at ``launch`` meets the line y = q.y."""
        up = 1.0 if q.y > p.y else -1.0

        def hit(t, s):
            return s[1] - q.y

        hit.terminal = True
        hit.direction = up
        sol = self._integrate(self.unit(p, launch), t_cap, [hit])
        if sol.t_events[0].size:
            return float(sol.y_events[0][0][0] - q.x), float(sol.t_events[0][0])
        if len(sol.t_events) > 1 and sol.t_events[1].size:
            return -math.inf, math.nan
        return math.copysign(math.inf, sol.y[0, -1] - q.x), math.nan

    def _shoot(self, p: Point, q: Point) -> tuple[float, float]:
        """Launch frame angle at p and length of the geodesic from p to q."""
        self.check(p)
        self.check(q)
        dy = q.y - p.y
        if abs(dy) <= 1e-14 * max(1.0, abs(p.y)):
            if q.x == p.x:
                raise ValueError("connect needs two distinct points")
            return (0.0 if q.x > p.x else math.pi), abs(q.x - p.x)
        sgn = 1.0 if dy > 0.0 else -1.0
        f = self.profile.f
        # length of an explicit broken path bounds the geodesic length
        bound = abs(q.x - p.x) + min(f(p.x), f(q.x)) * abs(dy)
        t_cap = 2.0 * bound + 1.0

        def X(phi):
            return self._crossing(p, sgn * phi, q, t_cap)

        lo, hi = 0.0, math.pi
        v_lo, v_hi = math.inf, -math.inf
        for _ in range(self.max_shoot):
            if math.isfinite(v_lo) and math.isfinite(v_hi):
                break
            mid = 0.5 * (lo + hi)
            val, length = X(mid)
            if abs(val) <= 1e-13:
                return sgn * mid, length
            if val > 0.0:
                lo, v_lo = mid, val
            else:
                hi, v_hi = mid, val
        else:
            raise ShootingError("could not bracket the launch angle", min(abs(v_lo), abs(v_hi)))
        phi = brentq(lambda a: X(a)[0], lo, hi, xtol=1e-15, maxiter=self.max_shoot)
        res, length = X(phi)
        if not abs(res) <= self.shoot_tol:
            raise ShootingError("launch-angle shoot missed the target", abs(res))
        return sgn * phi, length

    def connect(self, p: Point, q: Point) -> TangentVector:
        return self.unit(p, self._shoot(p, q)[0])

    def distance(self, p: Point, q: Point) -> float:
        if p == q:
            self.check(p)
            return 0.0
        return self._shoot(p, q)[1]
