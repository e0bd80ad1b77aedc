import math

import numpy as np
import pytest

from hadamard_kit.errors import ChartDomainError, NotVisibleError
from hadamard_kit.manifolds import (
    BoundaryPoint,
    EuclideanPlane,
    HyperbolicPlane,
    Isometry,
    Point,
    SurfaceOfRevolution,
    angular_distance,
    constant_profile,
    example1_profile,
    example2_chart_x,
    example2_profile,
    wrap_angle,
)


def test_wrap_and_angular_distance():
    assert wrap_angle(-0.5) == pytest.approx(2 * math.pi - 0.5)
    assert angular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert BoundaryPoint(0.0) == BoundaryPoint(2 * math.pi)


def test_hyperbolic_distance_oracle(H):
    # vertical geodesic: d((0,1), (0,e^t)) = t
    assert H.distance(Point(0, 1), Point(0, math.e**2)) == pytest.approx(2.0, abs=1e-14)
    assert H.distance(Point(0, 1), Point(0, 1)) == 0.0


def test_curvature_scaling():
    H4 = HyperbolicPlane(-4.0)
    assert H4.curvature(H4.origin) == -4.0
    # distances scale by 1/k
    assert H4.distance(Point(0, 1), Point(0, math.e)) == pytest.approx(0.5, abs=1e-14)


def test_flow_connect_roundtrip(H, rng):
    for _ in range(20):
        p = Point(rng.normal(), rng.uniform(0.3, 3))
        q = Point(rng.normal(), rng.uniform(0.3, 3))
        v = H.connect(p, q)
        d = H.distance(p, q)
        assert H.metric_norm(v) == pytest.approx(1.0, abs=1e-12)
        end, _ = H.geodesic_flow(v, d)
        assert end.x == pytest.approx(q.x, abs=1e-10) and end.y == pytest.approx(q.y, abs=1e-10)


def test_flow_negative_time(H):
    v = H.unit(H.origin, 0.7)
    p, w = H.geodesic_flow(v, 1.3)
    back, _ = H.geodesic_flow(w, -1.3)
    assert back.x == pytest.approx(0.0, abs=1e-12) and back.y == pytest.approx(1.0, abs=1e-12)


def test_hyperbolic_endpoint_roundtrip(H):
    for a in np.linspace(0.1, 6.2, 13):
        assert angular_distance(H.endpoint(H.ray_direction(H.origin, a)), a) < 1e-12


def test_hyperbolic_line_endpoints(H):
    v = H.line(0.3, 2.5)
    assert angular_distance(H.endpoint(v), 2.5) < 1e-10
    assert angular_distance(H.endpoint(-v), 0.3) < 1e-10
    with pytest.raises(NotVisibleError):
        H.line(1.0, 1.0)


def test_chart_domain(H):
    with pytest.raises(ChartDomainError):
        H.check(Point(0.0, -1.0))


def test_isometry_preserves_distance(H, rng):
    g = Isometry.random(rng, 1.0)
    p, q = Point(0.2, 0.8), Point(-1.0, 2.0)
    assert H.distance(g.apply(p), g.apply(q)) == pytest.approx(H.distance(p, q), abs=1e-12)
    h = g.compose(g.inverse())
    r = h.apply(p)
    assert r.x == pytest.approx(p.x, abs=1e-12) and r.y == pytest.approx(p.y, abs=1e-12)


def test_isometry_boundary_matches_rays(H, rng):
    g = Isometry.random(rng, 1.0)
    for a in (0.4, 2.0, 5.1):
        v = H.ray_direction(H.origin, a)
        gv = g.differential(H, v)
        assert angular_distance(float(g.boundary(H, a)), H.endpoint(gv)) < 1e-9


def test_euclidean(E):
    assert E.distance(Point(0, 0), Point(3, 4)) == 5.0
    assert E.curvature(Point(0, 0)) == 0.0
    with pytest.raises(NotVisibleError):
        E.line(0.0, 1.0)
    E.line(0.0, math.pi)


def test_constant_profile_is_flat():
    S = SurfaceOfRevolution(constant_profile(2.0))
    p, q = Point(0, 0), Point(1.0, 0.5)
    # metric dx^2 + 4 dy^2 is Euclidean after y -> 2y
    assert S.distance(p, q) == pytest.approx(math.hypot(1.0, 1.0), abs=1e-8)
    assert S.curvature(p) == 0.0


def test_revolution_shoot_matches_flow():
    S = SurfaceOfRevolution(example1_profile())
    p = S.origin
    v = S.unit(p, 0.6)
    q, _ = S.geodesic_flow(v, 1.5)
    assert S.distance(p, q) == pytest.approx(1.5, abs=1e-7)
    assert angular_distance(S.frame_angle(S.connect(p, q)), 0.6) < 1e-6


def test_revolution_leaves_domain():
    S = SurfaceOfRevolution(example1_profile())
    with pytest.raises(ChartDomainError):
        S.geodesic_flow(S.unit(S.origin, math.pi), 5.0)


def test_example_profiles():
    ex1 = example1_profile()
    # f(x) = e^x / sqrt(e^{2x} - 1)
    x = 0.7
    assert ex1.f(x) == pytest.approx(math.exp(x) / math.sqrt(math.exp(2 * x) - 1))
    ex2 = example2_profile(0.25)
    assert ex2.x_min == pytest.approx(example2_chart_x(0.25, 1.01))
    h = 1e-6
    assert ex2.df(3.0) == pytest.approx((ex2.f(3 + h) - ex2.f(3 - h)) / (2 * h), rel=1e-6)
    assert ex2.d2f(3.0) == pytest.approx((ex2.df(3 + h) - ex2.df(3 - h)) / (2 * h), rel=1e-6)
    with pytest.raises(ValueError):
        example2_profile(0.25, x_min=1.0)
    S = SurfaceOfRevolution(ex1)
    assert S.curvature(Point(1.0, 0.0)) < 0.0
