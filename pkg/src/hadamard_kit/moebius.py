"""rho-gauges, admissibility, cross ratios and metric derivatives.

Gauges are evaluated in log space: ``log_rho(a, b) = -(a|b)``, which is
``-inf`` for pairs that are not algebraically visible.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .asymptotics import DEFAULT_LIMITS, LimitSettings, gromov_product
from .errors import InadmissibleQuadrupleError, WitnessError
from .manifolds import BoundaryPoint, Manifold, Point, angular_distance
from .maps import BoundaryMap

WITNESS_POOL_SIZE = 64
MIN_SEPARATION = 1e-3


def default_witness_pool(n: int = WITNESS_POOL_SIZE) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(n) + 0.5) / n


class Gauge(ABC):
    """A symmetric boundary function rho with rho(z, z) = 0, accessed through log rho."""

    @abstractmethod
    def log_rho(self, a, b) -> np.ndarray:
        """Broadcast log rho over arrays of boundary angles."""

    def rho(self, xi: BoundaryPoint, eta: BoundaryPoint) -> float:
        return float(np.exp(self.log_rho(xi.angle, eta.angle)))


@dataclass(frozen=True)
class BasePointGauge(Gauge):
    """rho_x(xi, eta) = exp(-(xi|eta)_x)."""

    model: Manifold
    x: Point
    settings: LimitSettings = DEFAULT_LIMITS

    def log_rho(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        closed = self.model.gromov_closed_form(self.x, a, b)
        if closed is not None:
            return -np.asarray(closed, float)
        out = np.empty(a.shape)
        for idx in np.ndindex(a.shape):
            g = gromov_product(self.model, self.x, BoundaryPoint(a[idx]), BoundaryPoint(b[idx]), self.settings)
            out[idx] = -g.value
        return out


@dataclass(frozen=True)
class PushforwardGauge(Gauge):
    """f_* rho: (eta, eta') -> rho(f^-1 eta, f^-1 eta')."""

    f: BoundaryMap
    inner: Gauge

    def log_rho(self, a, b) -> np.ndarray:
        return self.inner.log_rho(self.f.apply_inverse(a), self.f.apply_inverse(b))


def rho(model: Manifold, x: Point, xi: BoundaryPoint, eta: BoundaryPoint) -> float:
    """exp(-(xi|eta)_x), zero for pairs with infinite Gromov product."""
    return BasePointGauge(model, x).rho(xi, eta)


def pushforward_gauge(f: BoundaryMap, x: Point) -> PushforwardGauge:
    return PushforwardGauge(f, BasePointGauge(f.source, x))


# cross ratios

def _pair_logs(gauge: Gauge, q) -> dict:
    ang = [xi.angle for xi in q]
    return {(i, j): float(gauge.log_rho(ang[i], ang[j])) for i, j in itertools.combinations(range(4), 2)}


def _admissible_from_logs(logs: dict) -> bool:
    invisible = {pair for pair, v in logs.items() if v == -np.inf}
    # no point may have two invisible partners
    return all(sum(1 for pair in invisible if i in pair) <= 1 for i in range(4))


def is_admissible(model: Manifold, q, x: Point | None = None) -> bool:
    """No triple of the quadruple contains two consecutive invisible pairs."""
    gauge = BasePointGauge(model, x if x is not None else model.origin)
    return _admissible_from_logs(_pair_logs(gauge, q))


def log_cross_ratio_gauge(gauge: Gauge, q) -> float:
    logs = _pair_logs(gauge, q)
    if not _admissible_from_logs(logs):
        raise InadmissibleQuadrupleError("quadruple contains a chain of invisible pairs")
    num = logs[(0, 1)] + logs[(2, 3)]
    den = logs[(0, 2)] + logs[(1, 3)]
    if num == -np.inf:
        return -math.inf
    if den == -np.inf:
        return math.inf
    return num - den


def log_cross_ratio(model: Manifold, x: Point, q) -> float:
    return log_cross_ratio_gauge(BasePointGauge(model, x), q)


def cross_ratio(model: Manifold, x: Point, q) -> float:
    """rho(1,2) rho(3,4) / (rho(1,3) rho(2,4)) with the conventions 0 and inf."""
    lcr = log_cross_ratio(model, x, q)
    if math.isinf(lcr):
        return 0.0 if lcr < 0 else math.inf
    return math.exp(lcr)


def log_cross_ratio_many(gauge: Gauge, quads) -> np.ndarray:
    """Vectorised log cross ratios for an (n, 4) array of angles; NaN marks inadmissible rows."""
    Q = np.asarray(quads, float)
    logs = {(i, j): np.asarray(gauge.log_rho(Q[:, i], Q[:, j]), float) for i, j in itertools.combinations(range(4), 2)}
    invisible = {pair: v == -np.inf for pair, v in logs.items()}
    bad = np.zeros(len(Q), bool)
    for i in range(4):
        bad |= sum(v.astype(int) for pair, v in invisible.items() if i in pair) > 1
    num = logs[(0, 1)] + logs[(2, 3)]
    den = logs[(0, 2)] + logs[(1, 3)]
    with np.errstate(invalid="ignore"):
        out = np.where(num == -np.inf, -np.inf, np.where(den == -np.inf, np.inf, num - den))
    out[bad] = np.nan
    return out


def sample_quadruples(n: int, min_separation: float = MIN_SEPARATION) -> np.ndarray:
    """Deterministic low-discrepancy quadruples of boundary angles, shape (n, 4).

    Quadruples with two points closer than ``min_separation`` are rejected.
    """
    halton = qmc.Halton(d=4, scramble=False)
    halton.fast_forward(1)  # skip the all-zero first point
    out = []
    while len(out) < n:
        pts = 2.0 * np.pi * halton.random(max(n, 64))
        for row in pts:
            if all(angular_distance(row[i], row[j]) >= min_separation for i, j in itertools.combinations(range(4), 2)):
                out.append(row)
                if len(out) == n:
                    break
    return np.array(out)


def moebius_distortion(f: BoundaryMap, x: Point, y: Point, samples: int = 1000) -> float:
    """max |log cr_y(f Q) - log cr_x(Q)| over sampled quadruples with finite cross ratios."""
    gx, gy = BasePointGauge(f.source, x), BasePointGauge(f.target, y)
    Q = sample_quadruples(samples)
    a = log_cross_ratio_many(gx, Q)
    b = log_cross_ratio_many(gy, f.apply(Q))
    ok = np.isfinite(a) & np.isfinite(b)
    return float(np.max(np.abs(a[ok] - b[ok]))) if ok.any() else 0.0


# metric derivatives

def _bracket(gauge: Gauge, z, a, b):
    return gauge.log_rho(z, a) + gauge.log_rho(z, b) - gauge.log_rho(a, b)


def select_witnesses(num: Gauge, den: Gauge, z: float, pool=None) -> tuple[float, float, float]:
    """Witness pair (a, b) from the pool maximising the smallest log rho among (z, a, b) in both gauges.

    Ties go to the lowest index pair. Returns (a, b, score).
    """
    pool = default_witness_pool() if pool is None else np.asarray(pool, float)
    n = pool.size
    score = np.full((n, n), np.inf)
    for g in (num, den):
        lz = np.asarray(g.log_rho(z, pool), float)
        lp = np.asarray(g.log_rho(pool[:, None], pool[None, :]), float)
        score = np.minimum(score, np.minimum(np.minimum(lz[:, None], lz[None, :]), lp))
    score[np.tril_indices(n)] = -np.inf
    flat = int(np.argmax(score))
    i, j = divmod(flat, n)
    best = float(score[i, j])
    if not best > -np.inf:
        raise WitnessError("no algebraically visible witness triple in the pool")
    return float(pool[i]), float(pool[j]), best


def log_metric_derivative_with(num: Gauge, den: Gauge, z: float, a: float, b: float) -> float:
    """log R_z(a, b) for an explicit witness pair."""
    return float(_bracket(num, z, a, b) - _bracket(den, z, a, b))


def log_metric_derivative(num: Gauge, den: Gauge, z, pool=None) -> float:
    """log of the metric derivative of ``num`` by ``den`` at the boundary angle ``z``."""
    z = z.angle if isinstance(z, BoundaryPoint) else float(z)
    a, b, _ = select_witnesses(num, den, z, pool)
    return log_metric_derivative_with(num, den, z, a, b)


def metric_derivative(num: Gauge, den: Gauge, z, pool=None) -> float:
    return math.exp(log_metric_derivative(num, den, z, pool))


def log_metric_derivative_grid(num: Gauge, den: Gauge, zs, pool=None) -> np.ndarray:
    """Vectorised log metric derivative over many boundary angles, witnesses chosen per angle."""
    pool = default_witness_pool() if pool is None else np.asarray(pool, float)
    zs = np.atleast_1d(np.asarray(zs, float))
    n = pool.size
    iu = np.triu_indices(n, 1)
    lp = [np.asarray(g.log_rho(pool[:, None], pool[None, :]), float)[iu] for g in (num, den)]
    lz = [np.asarray(g.log_rho(zs[:, None], pool[None, :]), float) for g in (num, den)]
    i, j = iu
    score = np.full((zs.size, i.size), np.inf)
    for k in range(2):
        score = np.minimum(score, np.minimum(np.minimum(lz[k][:, i], lz[k][:, j]), lp[k][None, :]))
    best = np.argmax(score, axis=1)
    rows = np.arange(zs.size)
    if not np.all(score[rows, best] > -np.inf):
        raise WitnessError("no algebraically visible witness triple in the pool")
    bi, bj = i[best], j[best]
    out = np.zeros(zs.size)
    for k, sign in ((0, 1.0), (1, -1.0)):
        out += sign * (lz[k][rows, bi] + lz[k][rows, bj] - lp[k][best])
    return out
