"""Boundary maps f: dX -> dY acting on direction angles at the reference points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .manifolds import BoundaryPoint, HyperbolicPlane, Isometry, Manifold, wrap_angle


@dataclass(frozen=True)
class BoundaryMap:
    """Homeomorphism of boundaries, given as vectorised angle maps in both directions.

    ``moebius`` records whether the map is claimed to preserve cross ratios;
    isometry-induced maps keep the generating isometry for oracle checks.
    """

    source: Manifold
    target: Manifold
    forward: Callable
    backward: Callable
    kind: str = "custom"
    moebius: bool = False
    isometry: Isometry | None = None
    label: str = ""

    def apply(self, angles):
        return wrap_angle(self.forward(np.asarray(angles, float)))

    def apply_inverse(self, angles):
        return wrap_angle(self.backward(np.asarray(angles, float)))

    def __call__(self, xi: BoundaryPoint) -> BoundaryPoint:
        return BoundaryPoint(float(self.apply(xi.angle)))

    def inverse(self, eta: BoundaryPoint) -> BoundaryPoint:
        return BoundaryPoint(float(self.apply_inverse(eta.angle)))

    def inverted(self) -> BoundaryMap:
        iso = self.isometry.inverse() if self.isometry is not None else None
        return BoundaryMap(self.target, self.source, self.backward, self.forward, self.kind, self.moebius, iso,
                           f"inverse({self.label})")

    def compose(self, other: BoundaryMap) -> BoundaryMap:
        """self after other."""
        iso = None
        if self.isometry is not None and other.isometry is not None:
            iso = self.isometry.compose(other.isometry)
        return BoundaryMap(
            other.source,
            self.target,
            lambda a: self.forward(other.forward(a)),
            lambda a: other.backward(self.backward(a)),
            "isometry" if iso is not None else "custom",
            self.moebius and other.moebius,
            iso,
            f"{self.label}*{other.label}",
        )

    def describe(self) -> dict:
        out = {"kind": self.kind, "moebius": self.moebius, "label": self.label}
        if self.isometry is not None:
            out["isometry"] = self.isometry.as_dict()
        return out


def identity_map(model: Manifold, target: Manifold | None = None) -> BoundaryMap:
    return BoundaryMap(model, target or model, lambda a: a, lambda a: a, "identity", True, None, "identity")


def isometry_map(g: Isometry, source: HyperbolicPlane, target: HyperbolicPlane | None = None) -> BoundaryMap:
    """Boundary extension of a half-plane isometry."""
    target = target or source
    if not (isinstance(source, HyperbolicPlane) and isinstance(target, HyperbolicPlane)):
        raise TypeError("isometry-induced maps need hyperbolic source and target")
    if source.kappa != target.kappa:
        raise ValueError("source and target curvatures differ; the map would not be an isometry")
    gi = g.inverse()
    return BoundaryMap(
        source,
        target,
        lambda a: g.boundary(source, a),
        lambda a: gi.boundary(source, a),
        "isometry",
        True,
        g,
        "isometry",
    )


def _newton_inverse(phi, eps: float, mode: int):
    theta = np.array(phi, float, copy=True)
    for _ in range(60):
        step = (theta + eps * np.sin(mode * theta) - phi) / (1.0 + eps * mode * np.cos(mode * theta))
        theta = theta - step
        if np.max(np.abs(step)) < 1e-15:
            break
    return theta


def circle_perturbation(source: Manifold, target: Manifold | None = None, epsilon: float = 0.1,
                        mode: int = 1) -> BoundaryMap:
    """theta -> theta + epsilon sin(mode theta), a circle homeomorphism when |epsilon mode| < 1."""
    if abs(epsilon * mode) >= 1.0:
        raise ValueError("|epsilon * mode| must be below 1 for a homeomorphism")
    return BoundaryMap(
        source,
        target or source,
        lambda a: a + epsilon * np.sin(mode * a),
        lambda a: _newton_inverse(a, epsilon, mode),
        "custom",
        epsilon == 0.0,
        None,
        f"circle(eps={epsilon},m={mode})",
    )
