"""Scenario configuration: TOML files validated by pydantic models with unknown keys rejected."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..asymptotics import CONVERGENCE_TOL, DIVERGENCE_THRESHOLD, STALL_RATIO, TRUNCATION_TIMES, LimitSettings
from ..errors import ConfigError
from ..manifolds import (
    EuclideanPlane,
    HyperbolicPlane,
    Isometry,
    Manifold,
    SurfaceOfRevolution,
    constant_profile,
    example1_profile,
    example2_profile,
)
from ..maps import BoundaryMap, circle_perturbation, identity_map, isometry_map


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSpec(Strict):
    kind: Literal["hyperbolic", "euclidean", "revolution"] = "hyperbolic"
    curvature: float = -1.0
    profile: Literal["constant", "example1", "example2"] = "example1"
    alpha: float = 0.25
    c: float = 2.0
    x_min: Optional[float] = None

    def build(self) -> Manifold:
        if self.kind == "hyperbolic":
            return HyperbolicPlane(self.curvature)
        if self.kind == "euclidean":
            return EuclideanPlane()
        if self.profile == "constant":
            prof = constant_profile(self.c)
        elif self.profile == "example1":
            prof = example1_profile() if self.x_min is None else example1_profile(self.x_min)
        else:
            prof = example2_profile(self.alpha, self.x_min)
        return SurfaceOfRevolution(prof)


class MapSpec(Strict):
    kind: Literal["identity", "isometry", "circle"] = "identity"
    epsilon: float = 0.1
    mode: int = 1
    # isometry: explicit (x, y, phi) or drawn from the seed with this spread
    point: Optional[tuple[float, float]] = None
    rotation: float = 0.0
    spread: float = 1.0

    def build(self, X: Manifold, Y: Manifold, rng) -> BoundaryMap:
        if self.kind == "identity":
            return identity_map(X, Y)
        if self.kind == "circle":
            return circle_perturbation(X, Y, self.epsilon, self.mode)
        from ..manifolds import Point

        if self.point is not None:
            g = Isometry.from_point_rotation(Point(*self.point), self.rotation)
        else:
            g = Isometry.random(rng, self.spread)
        return isometry_map(g, X, Y)


class LimitSpec(Strict):
    times: list[float] = Field(default_factory=lambda: list(TRUNCATION_TIMES))
    tol: float = CONVERGENCE_TOL
    divergence_threshold: float = DIVERGENCE_THRESHOLD
    stall_ratio: float = STALL_RATIO

    def build(self) -> LimitSettings:
        return LimitSettings(tuple(self.times), self.tol, self.divergence_threshold, self.stall_ratio)


class OutputSpec(Strict):
    dir: str = "reports"
    plots: bool = False


class ScenarioConfig(Strict):
    scenario: str
    seed: int = 0
    model_x: ModelSpec = Field(default_factory=ModelSpec)
    model_y: Optional[ModelSpec] = None
    map: MapSpec = Field(default_factory=MapSpec)
    limits: LimitSpec = Field(default_factory=LimitSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    params: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _known_scenario(self):
        from .scenarios import SCENARIOS

        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {sorted(SCENARIOS)}")
        # validating here rejects unknown parameter keys early
        self.params = SCENARIOS[self.scenario].Params(**self.params).model_dump()
        return self


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_override(data: dict, assignment: str) -> None:
    """Apply one ``dotted.key=value`` override, the value parsed as a TOML literal when possible."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, text = assignment.split("=", 1)
    parts = key.strip().split(".")
    node = data
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r} descends into a non-table value")
    node[parts[-1]] = _parse_value(text.strip())


def load_config(path, overrides=(), seed: int | None = None, out: str | None = None,
                plots: bool | None = None) -> ScenarioConfig:
    try:
        data = tomllib.loads(Path(path).read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    for item in overrides:
        apply_override(data, item)
    if seed is not None:
        data["seed"] = seed
    if out is not None:
        data.setdefault("output", {})["dir"] = out
    if plots:
        data.setdefault("output", {})["plots"] = True
    return config_from_dict(data)


def config_from_dict(data: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig(**data)
    except (ValidationError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
