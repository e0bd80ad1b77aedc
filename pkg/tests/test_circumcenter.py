import math

import numpy as np
import pytest

from hadamard_kit.circumcenter import (
    antipodal_u_gap,
    circumcenter,
    extremal_antipode_check,
    hull_certificate_angles,
    phi,
    qi_defect,
    route_residual,
    sup_u,
    u,
    u_grid,
)
from hadamard_kit.asymptotics import busemann_value
from hadamard_kit.manifolds import BoundaryPoint, Isometry, Point
from hadamard_kit.maps import circle_perturbation, identity_map, isometry_map


def close(p, q, tol):
    return abs(p.x - q.x) < tol and abs(p.y - q.y) < tol


def test_u_identity_is_busemann(H):
    f = identity_map(H)
    x, y = Point(0.2, 1.3), Point(-0.4, 0.7)
    for a in (0.3, 2.2, 5.0):
        assert u(x, y, BoundaryPoint(a), f) == pytest.approx(busemann_value(H, x, y, BoundaryPoint(a)), abs=1e-10)


def test_u_vanishes_at_image(H, rng):
    g = Isometry.random(rng, 1.0)
    f = isometry_map(g, H)
    x = Point(0.5, 1.5)
    vals = u_grid(x, g.apply(x), np.linspace(0, 6.2, 40), f)
    assert np.max(np.abs(vals)) < 1e-9


def test_phi_identity(H):
    v = H.unit(Point(0.3, 0.8), 1.1)
    w = phi(v, identity_map(H))
    assert close(w.base, v.base, 1e-8)
    assert abs(w.dx - v.dx) < 1e-8 and abs(w.dy - v.dy) < 1e-8


def test_phi_isometry_is_differential(H, rng):
    g = Isometry.random(rng, 1.0)
    f = isometry_map(g, H)
    v = H.unit(Point(-0.2, 1.2), 2.4)
    w, gv = phi(v, f), g.differential(H, v)
    assert close(w.base, gv.base, 1e-8)
    assert abs(w.dx - gv.dx) < 1e-8 and abs(w.dy - gv.dy) < 1e-8


def test_phi_antisymmetric(H, rng):
    f = isometry_map(Isometry.random(rng, 1.0), H)
    v = H.unit(Point(0.1, 1.1), 0.9)
    a, b = phi(-v, f), -phi(v, f)
    assert close(a.base, b.base, 1e-6)
    assert abs(a.dx - b.dx) < 1e-6 and abs(a.dy - b.dy) < 1e-6


def test_phi_non_moebius_foot_point(H):
    # the foot condition holds, antisymmetry only approximately (a diagnostic, not an identity)
    f = circle_perturbation(H, H, 0.1)
    v = H.unit(Point(0.1, 1.1), 0.9)
    w = phi(v, f)
    assert abs(u(v.base, w.base, BoundaryPoint(H.endpoint(v)), f)) < 1e-6
    a, b = phi(-v, f), -phi(v, f)
    assert H.distance(a.base, b.base) < 1e-2


def test_route_residual(H, rng):
    f = isometry_map(Isometry.random(rng, 1.0), H)
    assert route_residual(Point(0.2, 0.9), Point(-0.3, 1.4), BoundaryPoint(1.0), f) < 1e-8


def test_hull_certificate_angles():
    # three directions at 120 degrees enclose the origin
    c = hull_certificate_angles([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    assert c.margin < 1e-12 and c.largest_gap < math.pi
    # a half-plane of directions does not
    c = hull_certificate_angles([0.0, 0.5, 1.0])
    assert c.margin > 0.1


def test_circumcenter_identity(H):
    x = Point(0.4, 1.2)
    res = circumcenter(x, identity_map(H))
    assert close(res.center, x, 1e-8)
    assert res.radius < 1e-8


def test_circumcenter_isometry(H, rng):
    g = Isometry.random(rng, 1.0)
    f = isometry_map(g, H)
    x = Point(-0.3, 0.9)
    res = circumcenter(x, f)
    assert H.distance(res.center, g.apply(x)) < 1e-6
    assert res.radius < 1e-6
    assert res.certificate.margin < 1e-6


def test_circumcenter_start_independent(H):
    f = circle_perturbation(H, H, 0.1)
    x = H.origin
    r1 = circumcenter(x, f)
    r2 = circumcenter(x, f, start=Point(0.8, 2.0))
    assert H.distance(r1.center, r2.center) < 1e-3
    assert r1.radius > 0.0
    assert r1.certificate.margin < 1e-5
    assert len(r1.extremal_set) >= 3


def test_circumcenter_is_minimiser(H):
    f = circle_perturbation(H, H, 0.1)
    x = H.origin
    res = circumcenter(x, f)
    for a in np.linspace(0, 2 * math.pi, 8, endpoint=False):
        y = H.geodesic_flow(H.unit(res.center, a), 0.05)[0]
        assert sup_u(x, y, f) >= res.radius - 1e-6


def test_circumcenter_deterministic(H):
    f = circle_perturbation(H, H, 0.1)
    r1, r2 = circumcenter(H.origin, f), circumcenter(H.origin, f)
    assert r1.center == r2.center and r1.radius == r2.radius


def test_antipode_checks_isometry(H, rng):
    g = Isometry.random(rng, 0.5)
    f = isometry_map(g, H)
    x = Point(0.1, 1.1)
    res = circumcenter(x, f)
    assert extremal_antipode_check(res, x, f) < 1e-3
    assert antipodal_u_gap(res, x, f) < 1e-3


def test_qi_defect(H, rng):
    g = Isometry.random(rng, 1.0)
    f = isometry_map(g, H)
    x, x2 = Point(0.0, 1.0), Point(0.5, 2.0)
    q = qi_defect(x, x2, f, circumcenter(x, f), circumcenter(x2, f))
    assert q.defect < 1e-5 and q.passed
    same = circumcenter(x, f)
    assert qi_defect(x, x, f, same, same).defect == 0.0
