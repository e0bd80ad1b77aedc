import numpy as np
import pytest

from hadamard_kit.manifolds import EuclideanPlane, HyperbolicPlane, Point


@pytest.fixture
def H():
    return HyperbolicPlane()


@pytest.fixture
def E():
    return EuclideanPlane()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def near_point(model, rng, spread=1.0) -> Point:
    v = model.unit(model.origin, rng.uniform(0, 2 * np.pi))
    return model.geodesic_flow(v, rng.uniform(0, spread))[0]
