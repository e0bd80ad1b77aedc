"""Registered scenarios. Each turns a validated config into report rows.

Rows are produced in case order. A failure inside one case becomes a failed
row carrying the exception text, and the scenario carries on.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import ConfigDict, BaseModel

from .. import asymptotics as asy
from ..circumcenter import (
    antipodal_u_gap,
    circumcenter,
    extremal_antipode_check,
    phi,
    qi_defect,
    route_residual,
)
from ..errors import HadamardError
from ..manifolds import (
    BoundaryPoint,
    HyperbolicPlane,
    Isometry,
    Manifold,
    Point,
    SurfaceOfRevolution,
    TangentVector,
    angular_distance,
    constant_profile,
    example1_profile,
    example2_profile,
)
from ..maps import circle_perturbation, identity_map, isometry_map
from ..moebius import (
    BasePointGauge,
    log_cross_ratio_many,
    log_metric_derivative,
    log_metric_derivative_grid,
    moebius_distortion,
    sample_quadruples,
)
from .report import Row, bound_row, check_row, diagnostic, judged


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


@dataclass
class Context:
    X: Manifold
    Y: Manifold
    f: object
    rng: np.random.Generator
    limits: asy.LimitSettings
    params: dict
    extras: dict
    map_mode: int = 1


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    Params: type
    columns: tuple
    run: Callable[[Context], list]


SCENARIOS: dict[str, Scenario] = {}


def register(name, summary, params, columns):
    def deco(fn):
        SCENARIOS[name] = Scenario(name, summary, params, tuple(columns), fn)
        return fn

    return deco


def _error_row(case_id, params, exc, judged_row=True) -> Row:
    flag = f"error: {type(exc).__name__}: {exc}"
    if judged_row:
        return Row(case_id, params, math.nan, None, math.inf, 0.0, False, flag)
    return diagnostic(case_id, params, math.nan, flag)


class _Cases:
    """Row collector with sequential case ids and per-case error capture."""

    def __init__(self):
        self.rows: list[Row] = []

    @property
    def next_id(self) -> int:
        return len(self.rows)

    def add(self, make, params, judged_row=True):
        try:
            row = make(self.next_id, params)
        except Exception as exc:  # noqa: BLE001 - any case failure becomes a failed row
            row = _error_row(self.next_id, params, exc, judged_row)
        self.rows.append(row)
        return row


# sampling helpers

def random_point(model: Manifold, rng: np.random.Generator, spread: float = 1.0) -> Point:
    """A point at distance at most ``spread`` from the model's reference point."""
    v = model.unit(model.origin, rng.uniform(0.0, 2.0 * np.pi))
    return model.geodesic_flow(v, rng.uniform(0.0, spread))[0]


def random_near(model: Manifold, p: Point, rng: np.random.Generator, radius: float) -> Point:
    v = model.unit(p, rng.uniform(0.0, 2.0 * np.pi))
    return model.geodesic_flow(v, rng.uniform(0.0, radius))[0]


def random_unit(model: Manifold, rng, spread=1.0) -> TangentVector:
    return model.unit(random_point(model, rng, spread), rng.uniform(0.0, 2.0 * np.pi))


def vector_gap(model: Manifold, v: TangentVector, w: TangentVector) -> float:
    """Distance of base points plus the angle between frame directions."""
    d = model.distance(v.base, w.base) if v.base != w.base else 0.0
    return d + angular_distance(model.frame_angle(v), model.frame_angle(w))


def _fmt(p) -> str:
    if isinstance(p, Point):
        return f"({p.x:.6f},{p.y:.6f})"
    return f"{p:.6f}"


def _moebius_run(ctx: Context) -> bool:
    return bool(getattr(ctx.f, "moebius", False))


# scenarios

class GromovAngleParams(Params):
    alphas: list[float] = [math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3, 5 * math.pi / 6,
                           math.pi]
    base_angle: float = 0.0
    tolerance: float = 1e-3


@register("gromov-angle", "Gromov product of two rays from the reference point against -ln sin(alpha/2)",
          GromovAngleParams, ["alpha_rad"])
def gromov_angle(ctx: Context):
    p = ctx.params
    if not isinstance(ctx.X, HyperbolicPlane):
        raise HadamardError("gromov-angle needs a hyperbolic model_x")
    cases = _Cases()
    o = ctx.X.origin
    for a in p["alphas"]:
        def make(cid, params, a=a):
            g = asy.gromov_product(ctx.X, o, BoundaryPoint(p["base_angle"]), BoundaryPoint(p["base_angle"] + a),
                                   ctx.limits)
            expected = -math.log(math.sin(a / 2.0)) / ctx.X.k
            return judged(cid, params, g.value, expected, p["tolerance"], flag="divergent" if g.divergent else "")

        cases.add(make, {"alpha_rad": a})
    return cases.rows


class CrossRatioParams(Params):
    quadruples: int = 500
    base_pairs: int = 10
    max_distance: float = 3.0
    spread: float = 1.0
    tolerance: float = 5e-4


@register("crossratio-invariance", "max |log cr_x - log cr_y| over sampled admissible quadruples",
          CrossRatioParams, ["quantity", "x", "y", "distance", "quadruples"])
def crossratio_invariance(ctx: Context):
    p = ctx.params
    Q = sample_quadruples(p["quadruples"])
    cases = _Cases()
    for _ in range(p["base_pairs"]):
        x = random_point(ctx.X, ctx.rng, p["spread"])
        y = random_near(ctx.X, x, ctx.rng, p["max_distance"])
        params = {"quantity": "max_abs_log_cr_gap", "x": _fmt(x), "y": _fmt(y),
                  "distance": ctx.X.distance(x, y) if x != y else 0.0}

        def make(cid, params, x=x, y=y):
            a = log_cross_ratio_many(BasePointGauge(ctx.X, x, ctx.limits), Q)
            b = log_cross_ratio_many(BasePointGauge(ctx.X, y, ctx.limits), Q)
            both = np.isfinite(a) & np.isfinite(b)
            # infinite values must agree as well
            same_inf = np.all((a == b) | both)
            params["quadruples"] = int(both.sum())
            gap = float(np.max(np.abs(a[both] - b[both]))) if both.any() else 0.0
            return judged(cid, params, gap, 0.0, p["tolerance"], residual=gap if same_inf else math.inf)

        cases.add(make, params)
    return cases.rows


class DerivativeParams(Params):
    cases: int = 200
    spread: float = 1.0
    max_distance: float = 3.0
    tolerance: float = 1e-4
    grid: int = 512
    refined_grid: int = 2048
    minmax_pairs: int = 5
    minmax_tolerance: float = 1e-3


@register("derivative-identities", "chain rule, geometric mean value theorem, e^B identity and max*min = 1",
          DerivativeParams, ["quantity", "inputs"])
def derivative_identities(ctx: Context):
    p = ctx.params
    X, rng = ctx.X, ctx.rng
    cases = _Cases()

    def gauge(pt):
        return BasePointGauge(X, pt, ctx.limits)

    for _ in range(p["cases"]):
        x = random_point(X, rng, p["spread"])
        y, z = random_near(X, x, rng, p["max_distance"]), random_near(X, x, rng, p["max_distance"])
        xi = rng.uniform(0.0, 2.0 * np.pi)
        inputs = f"x={_fmt(x)} y={_fmt(y)} z={_fmt(z)} xi={xi:.6f}"

        def chain(cid, params, x=x, y=y, z=z, xi=xi):
            lhs = log_metric_derivative(gauge(x), gauge(y), xi) + log_metric_derivative(gauge(y), gauge(z), xi)
            rhs = log_metric_derivative(gauge(x), gauge(z), xi)
            return judged(cid, params, math.exp(lhs), math.exp(rhs), p["tolerance"],
                          residual=abs(math.expm1(lhs - rhs)))

        cases.add(chain, {"quantity": "chain_rule", "inputs": inputs})

        def exp_busemann(cid, params, x=x, y=y, xi=xi):
            lr = log_metric_derivative(gauge(x), gauge(y), xi)
            b = asy.busemann_value(X, x, y, BoundaryPoint(xi))
            return judged(cid, params, math.exp(lr), math.exp(b), p["tolerance"], residual=abs(math.expm1(lr - b)))

        cases.add(exp_busemann, {"quantity": "derivative_equals_exp_busemann", "inputs": inputs})

        zeta = rng.uniform(0.0, 2.0 * np.pi)

        def gmvt(cid, params, x=x, y=y, xi=xi, zeta=zeta):
            g, h = gauge(x), gauge(y)
            lhs = 2.0 * float(g.log_rho(xi, zeta))
            rhs = log_metric_derivative(g, h, xi) + log_metric_derivative(g, h, zeta) + 2.0 * float(h.log_rho(xi, zeta))
            return judged(cid, params, math.exp(lhs), math.exp(rhs), p["tolerance"],
                          residual=abs(math.expm1(lhs - rhs)))

        cases.add(gmvt, {"quantity": "gmvt", "inputs": f"x={_fmt(x)} y={_fmt(y)} z={xi:.6f} z'={zeta:.6f}"})

    for _ in range(p["minmax_pairs"]):
        x = random_point(X, rng, p["spread"])
        y = random_near(X, x, rng, p["max_distance"])
        residuals = {}
        for n in (p["grid"], p["refined_grid"]):
            def maxmin(cid, params, x=x, y=y, n=n):
                grid = 2.0 * np.pi * np.arange(n) / n
                lr = log_metric_derivative_grid(gauge(x), gauge(y), grid)
                val = float(lr.max() + lr.min())
                residuals[n] = abs(val)
                return judged(cid, params, math.exp(val), 1.0, p["minmax_tolerance"], residual=abs(val))

            cases.add(maxmin, {"quantity": f"max_times_min_grid{n}", "inputs": f"x={_fmt(x)} y={_fmt(y)}"})

        # nested grids raise the max and lower the min, so the residual need not shrink: report the change only
        def refinement(cid, params):
            a, b = residuals.get(p["grid"], math.inf), residuals.get(p["refined_grid"], math.inf)
            return diagnostic(cid, params, b - a, "diagnostic: refined minus coarse residual")

        cases.add(refinement, {"quantity": "refinement_change", "inputs": f"x={_fmt(x)} y={_fmt(y)}"},
                  judged_row=False)
    return cases.rows


class PhiParams(Params):
    vectors: int = 20
    conjugacy_cases: int = 100
    isometries: int = 3
    spread: float = 1.0
    identity_tol: float = 1e-8
    antisymmetry_tol: float = 1e-6
    conjugacy_tol: float = 2e-4
    isometry_tol: float = 1e-5
    functoriality_tol: float = 1e-4
    route_tol: float = 1e-4


@register("phi-properties", "identity, antisymmetry, conjugacy, isometry and functoriality of phi",
          PhiParams, ["quantity", "inputs"])
def phi_properties(ctx: Context):
    p = ctx.params
    X, Y, f, rng = ctx.X, ctx.Y, ctx.f, ctx.rng
    cases = _Cases()
    moeb = _moebius_run(ctx)

    def row(cid, params, value, tol):
        if moeb:
            return judged(cid, params, value, 0.0, tol)
        return diagnostic(cid, params, value, "diagnostic: non-moebius map")

    fid = identity_map(X)
    for _ in range(p["vectors"]):
        v = random_unit(X, rng, p["spread"])
        inputs = f"base={_fmt(v.base)} angle={X.frame_angle(v):.6f}"
        cases.add(lambda cid, prm, v=v: judged(cid, prm, vector_gap(X, phi(v, fid), v), 0.0, p["identity_tol"]),
                  {"quantity": "phi_identity", "inputs": inputs})
        cases.add(lambda cid, prm, v=v: row(cid, prm, vector_gap(Y, phi(-v, f), -phi(v, f)), p["antisymmetry_tol"]),
                  {"quantity": "phi_antisymmetry", "inputs": inputs}, judged_row=moeb)

    for _ in range(p["conjugacy_cases"]):
        x, x2 = random_point(X, rng, p["spread"]), random_point(X, rng, p["spread"])
        xi = BoundaryPoint(rng.uniform(0.0, 2.0 * np.pi))
        y = random_point(Y, rng, p["spread"])
        inputs = f"x={_fmt(x)} x'={_fmt(x2)} xi={xi.angle:.6f}"

        def conj(cid, params, x=x, x2=x2, xi=xi):
            a = phi(asy.ray(X, x, xi), f).base
            b = phi(asy.ray(X, x2, xi), f).base
            lhs = asy.busemann_value(Y, a, b, f(xi))
            rhs = asy.busemann_value(X, x, x2, xi)
            return row(cid, params, abs(lhs - rhs), p["conjugacy_tol"])

        cases.add(conj, {"quantity": "geodesic_conjugacy", "inputs": inputs}, judged_row=moeb)
        cases.add(lambda cid, prm, x=x, y=y, xi=xi: row(cid, prm, route_residual(x, y, xi, f), p["route_tol"]),
                  {"quantity": "route_equivalence", "inputs": f"x={_fmt(x)} y={_fmt(y)} xi={xi.angle:.6f}"},
                  judged_row=moeb)

    if isinstance(X, HyperbolicPlane):
        for _ in range(p["isometries"]):
            g1, g2 = Isometry.random(rng), Isometry.random(rng)
            f1, f2 = isometry_map(g1, X), isometry_map(g2, X)
            f12 = f1.compose(f2)
            for _ in range(max(1, p["vectors"] // p["isometries"])):
                v = random_unit(X, rng, p["spread"])
                inputs = f"base={_fmt(v.base)} angle={X.frame_angle(v):.6f}"
                cases.add(lambda cid, prm, v=v, f1=f1, g1=g1: judged(
                    cid, prm, vector_gap(X, phi(v, f1), g1.differential(X, v)), 0.0, p["isometry_tol"]),
                    {"quantity": "phi_isometry_differential", "inputs": inputs})
                cases.add(lambda cid, prm, v=v, f1=f1, f2=f2, f12=f12: judged(
                    cid, prm, vector_gap(X, phi(v, f12), phi(phi(v, f2), f1)), 0.0, p["functoriality_tol"]),
                    {"quantity": "phi_functoriality", "inputs": inputs})
    return cases.rows


class IsometryRecoveryParams(Params):
    isometries: int = 5
    points: int = 20
    spread: float = 1.0
    grid: int = 256
    solver_tol: float = 1e-7
    center_tol: float = 1e-3
    radius_tol: float = 1e-3
    margin_tol: float = 1e-6


@register("isometry-recovery", "circumcenter extension of isometry-induced maps recovers the isometry",
          IsometryRecoveryParams, ["quantity", "isometry", "x"])
def isometry_recovery(ctx: Context):
    p = ctx.params
    X, rng = ctx.X, ctx.rng
    if not isinstance(X, HyperbolicPlane):
        raise HadamardError("isometry-recovery needs a hyperbolic model_x")
    cases = _Cases()
    times = []
    for k in range(p["isometries"]):
        g = Isometry.random(rng, p["spread"])
        f = isometry_map(g, X)
        for _ in range(p["points"]):
            x = random_point(X, rng, p["spread"])
            base = {"isometry": k, "x": _fmt(x)}
            t0 = time.perf_counter()
            try:
                res = circumcenter(x, f, p["grid"], p["solver_tol"])
            except Exception as exc:  # noqa: BLE001 - any case failure becomes a failed row
                for q in ("center_error", "radius", "hull_margin"):
                    cases.rows.append(_error_row(cases.next_id, {"quantity": q, **base}, exc))
                continue
            times.append(time.perf_counter() - t0)
            gx = g.apply(x)
            err = X.distance(res.center, gx) if res.center != gx else 0.0
            cases.add(lambda cid, prm: judged(cid, prm, err, 0.0, p["center_tol"]), {"quantity": "center_error", **base})
            cases.add(lambda cid, prm: bound_row(cid, prm, res.radius, p["radius_tol"]), {"quantity": "radius", **base})
            cases.add(lambda cid, prm: bound_row(cid, prm, res.certificate.margin, p["margin_tol"]),
                      {"quantity": "hull_margin", **base})
    ctx.extras["solve_seconds_max"] = max(times) if times else 0.0
    ctx.extras["solve_seconds_mean"] = float(np.mean(times)) if times else 0.0
    return cases.rows


class QIParams(Params):
    points: int = 15
    spread: float = 1.5
    grid: int = 256
    solver_tol: float = 1e-7
    constant_tol: float = 1e-3
    slack: float = 1e-3
    lipschitz_slack: float = 2e-3


@register("qi-bound", "quasi-isometry defect of the extension, its CAT(-1) bound and the 1-Lipschitz radius",
          QIParams, ["quantity", "x", "x2"])
def qi_bound(ctx: Context):
    p = ctx.params
    X, Y, f, rng = ctx.X, ctx.Y, ctx.f, ctx.rng
    cases = _Cases()
    moeb = _moebius_run(ctx)
    if isinstance(X, HyperbolicPlane):
        o = X.origin
        for alpha, expected in ((math.pi / 2, math.log(math.sqrt(2.0))), (2 * math.pi / 3, 0.143841)):
            cases.add(lambda cid, prm, alpha=alpha, expected=expected: judged(
                cid, prm, asy.gromov_product(X, o, BoundaryPoint(0.0), BoundaryPoint(alpha), ctx.limits).value * X.k,
                expected, p["constant_tol"]), {"quantity": f"gromov_constant_alpha_{alpha:.6f}", "x": _fmt(o), "x2": ""})

    pts = [random_point(X, rng, p["spread"]) for _ in range(p["points"])]
    results = {}
    for i, x in enumerate(pts):
        try:
            results[i] = circumcenter(x, f, p["grid"], p["solver_tol"])
        except Exception as exc:  # noqa: BLE001 - any case failure becomes a failed row
            cases.rows.append(_error_row(cases.next_id, {"quantity": "circumcenter", "x": _fmt(x), "x2": ""}, exc,
                                         judged_row=moeb))
    cat = moeb and all(isinstance(m, HyperbolicPlane) and m.kappa <= -1.0 for m in (X, Y))
    note = "" if moeb else "diagnostic: non-moebius map"
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if i not in results or j not in results:
                continue
            r1, r2 = results[i], results[j]
            base = {"x": _fmt(pts[i]), "x2": _fmt(pts[j])}
            q = qi_defect(pts[i], pts[j], f, r1, r2, p["slack"])
            dxx = X.distance(pts[i], pts[j])
            lip = abs(r1.radius - r2.radius)
            if moeb:
                cases.add(lambda cid, prm, q=q: bound_row(cid, prm, q.defect, q.bound + q.slack),
                          {"quantity": "qi_defect", **base})
                if cat:
                    cases.add(lambda cid, prm, q=q: bound_row(cid, prm, q.defect, 2 * math.log(math.sqrt(2.0)) + p["slack"]),
                              {"quantity": "qi_defect_cat_bound", **base})
                cases.add(lambda cid, prm, lip=lip, dxx=dxx: bound_row(cid, prm, lip, dxx + p["lipschitz_slack"]),
                          {"quantity": "radius_lipschitz", **base})
            else:
                cases.add(lambda cid, prm, q=q: diagnostic(cid, prm, q.defect - q.bound - q.slack, note),
                          {"quantity": "qi_defect_minus_bound", **base}, judged_row=False)
                cases.add(lambda cid, prm, lip=lip, dxx=dxx: diagnostic(cid, prm, lip - dxx - p["lipschitz_slack"], note),
                          {"quantity": "radius_lipschitz_excess", **base}, judged_row=False)
    ctx.extras["radii"] = [results[i].radius for i in sorted(results)]
    return cases.rows


class VisibilityParams(Params):
    alpha: float = 0.25
    increment_tol: float = 1e-3
    growth_threshold: float = 10.0


def clairaut_one_pair(model: SurfaceOfRevolution):
    """The two unit vectors at the base point with Clairaut constant +1 and -1 pointing outward."""
    F = model.profile.f(model.origin.x)
    up = model.vector(model.origin, math.sqrt(1.0 - 1.0 / F**2), 1.0 / F**2)
    down = model.vector(model.origin, math.sqrt(1.0 - 1.0 / F**2), -1.0 / F**2)
    return up, down


def clairaut_one_gromov(model: SurfaceOfRevolution, limits: asy.LimitSettings) -> asy.LimitValue:
    up, down = clairaut_one_pair(model)
    xi, eta = asy.boundary_point(model, up), asy.boundary_point(model, down)
    return asy.gromov_product(model, model.origin, xi, eta, limits)


@register("revolution-visibility", "finite versus infinite Gromov products of Clairaut-1 rays on two profiles",
          VisibilityParams, ["quantity", "profile", "T"])
def revolution_visibility(ctx: Context):
    p = ctx.params
    cases = _Cases()
    limits = ctx.limits
    ex1 = SurfaceOfRevolution(example1_profile())
    ex2 = SurfaceOfRevolution(example2_profile(p["alpha"]))
    values = {}
    for name, model in (("example1", ex1), ("example2", ex2)):
        try:
            values[name] = clairaut_one_gromov(model, limits)
        except Exception as exc:  # noqa: BLE001 - any case failure becomes a failed row
            cases.rows.append(_error_row(cases.next_id, {"quantity": "gromov_iterates", "profile": name, "T": ""}, exc))
            continue
        for T, g in zip(values[name].times, values[name].iterates):
            cases.rows.append(diagnostic(cases.next_id, {"quantity": "iterate", "profile": name, "T": T}, g,
                                         "diagnostic: truncated iterate"))
    T_last = limits.times[-1]
    if "example1" in values:
        g1 = values["example1"]
        cases.add(lambda cid, prm: check_row(cid, prm, g1.value, g1.finite, flag="" if g1.finite else "divergent"),
                  {"quantity": "finite_classification", "profile": "example1", "T": T_last})
        inc = g1.iterates[-1] - g1.iterates[-2]
        cases.add(lambda cid, prm: judged(cid, prm, inc, 0.0, p["increment_tol"]),
                  {"quantity": "last_increment", "profile": "example1", "T": T_last})
    if "example2" in values:
        g2 = values["example2"]
        last = g2.iterates[-1]
        cases.add(lambda cid, prm: check_row(cid, prm, last, last > p["growth_threshold"],
                                             expected=p["growth_threshold"]),
                  {"quantity": "iterate_exceeds_threshold", "profile": "example2", "T": T_last})
        cases.add(lambda cid, prm: check_row(cid, prm, g2.value, g2.divergent and g2.iterates[-1] > g2.iterates[-2],
                                             flag="divergent" if g2.divergent else ""),
                  {"quantity": "divergent_classification", "profile": "example2", "T": T_last})
    return cases.rows


class ClairautParams(Params):
    profiles: list[str] = ["example1", "example2", "constant"]
    alpha: float = 0.25
    vectors: int = 5
    t_max: float = 50.0
    samples: int = 10
    drift_tol: float = 1e-6
    norm_tol: float = 1e-9


@register("clairaut-drift", "Clairaut constant and unit speed along integrated geodesics",
          ClairautParams, ["quantity", "profile", "launch_angle"])
def clairaut_drift(ctx: Context):
    p = ctx.params
    cases = _Cases()
    builders = {"example1": example1_profile, "example2": lambda: example2_profile(p["alpha"]),
                "constant": constant_profile}
    for name in p["profiles"]:
        if name not in builders:
            cases.rows.append(_error_row(cases.next_id, {"quantity": "profile", "profile": name, "launch_angle": ""},
                                         ValueError(f"unknown profile {name!r}")))
            continue
        model = SurfaceOfRevolution(builders[name]())
        F = model.profile.f(model.origin.x)
        # outward launches with |Clairaut constant| <= 1 never turn back toward the chart edge
        limit = math.asin(min(1.0, 1.0 / F)) if name != "constant" else math.pi / 2
        for _ in range(p["vectors"]):
            theta = ctx.rng.uniform(-limit, limit)
            v = model.unit(model.origin, theta)
            ts = np.linspace(p["t_max"] / p["samples"], p["t_max"], p["samples"])
            state = {}

            def integrate(v=v, ts=ts):
                if state:
                    return state
                c0 = model.clairaut_constant(v)
                drift, norm = 0.0, 0.0
                for t in ts:
                    _, w = model.geodesic_flow(v, float(t))
                    drift = max(drift, abs(model.clairaut_constant(w) - c0) / t)
                    norm = max(norm, abs(model.metric_norm(w) - 1.0))
                state.update(drift=drift, norm=norm)
                return state

            params = {"profile": name, "launch_angle": theta}
            cases.add(lambda cid, prm: judged(cid, prm, integrate()["drift"], 0.0, p["drift_tol"]),
                      {"quantity": "clairaut_drift_per_time", **params})
            cases.add(lambda cid, prm: judged(cid, prm, integrate()["norm"], 0.0, p["norm_tol"]),
                      {"quantity": "unit_speed_deviation", **params})
    return cases.rows


class DistortionParams(Params):
    epsilons: list[float] = [0.05, 0.1, 0.2]
    samples: int = 1000
    points: int = 3
    spread: float = 1.0
    grid: int = 256
    solver_tol: float = 1e-7
    margin_tol: float = 1e-5


@register("distortion-probe", "cross-ratio distortion and extension diagnostics for non-Moebius circle maps",
          DistortionParams, ["quantity", "epsilon", "x"])
def distortion_probe(ctx: Context):
    p = ctx.params
    X, Y, rng = ctx.X, ctx.Y, ctx.rng
    cases = _Cases()
    pts = [random_point(X, rng, p["spread"]) for _ in range(p["points"])]
    for eps in p["epsilons"]:
        f = circle_perturbation(X, Y, eps, ctx.map_mode)
        base = {"epsilon": eps}

        def distortion(cid, prm, f=f):
            d = moebius_distortion(f, X.origin, Y.origin, p["samples"])
            return check_row(cid, prm, d, d > 0.0)

        cases.add(distortion, {"quantity": "moebius_distortion", "x": "", **base})
        for x in pts:
            loc = {**base, "x": _fmt(x)}
            try:
                res = circumcenter(x, f, p["grid"], p["solver_tol"])
            except Exception as exc:  # noqa: BLE001 - any case failure becomes a failed row
                cases.rows.append(_error_row(cases.next_id, {"quantity": "circumcenter", **loc}, exc))
                continue
            cases.add(lambda cid, prm, res=res: check_row(cid, prm, res.radius, res.radius > 0.0),
                      {"quantity": "radius_positive", **loc})
            cases.add(lambda cid, prm, res=res: bound_row(cid, prm, res.certificate.margin, p["margin_tol"]),
                      {"quantity": "hull_margin", **loc})
            note = "diagnostic: non-moebius map"
            diag = [
                ("extremal_count", lambda res=res: float(len(res.extremal_set))),
                ("max_plus_min_u", lambda res=res: res.diagnostics["max_u"] + res.diagnostics["min_u"]),
                ("antipode_deviation", lambda res=res, x=x, f=f: extremal_antipode_check(res, x, f)),
                ("antipodal_u_gap", lambda res=res, x=x, f=f: antipodal_u_gap(res, x, f)),
                ("cocycle_residual", lambda res=res: res.diagnostics["cocycle_residual"]),
            ]
            for q, fn in diag:
                cases.add(lambda cid, prm, fn=fn: diagnostic(cid, prm, float(fn()), note), {"quantity": q, **loc},
                          judged_row=False)
    return cases.rows
