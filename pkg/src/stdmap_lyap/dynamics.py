"""Torus dynamics: the standard map, circle rotations and their derivatives.

All coordinates live on the unit torus [0, 1)^2 and are reduced after every
step.  Functions accept plain floats or numpy arrays; the ``*_arrays`` helpers
are the vectorized workhorses used by the Monte Carlo drivers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .products import ScaledProduct

TWO_PI = 2.0 * math.pi
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TorusPoint:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class MapSpec:
    """Either ``standard`` (parameter lambda) or ``rotation`` (parameter alpha)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "standard":
            if not self.param > 0:
                raise ValueError(f"standard map needs lambda > 0, got {self.param}")
        elif self.kind == "rotation":
            if not 0.0 < self.param < 1.0:
                raise ValueError(f"rotation needs alpha in (0, 1), got {self.param}")
        else:
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def standard(cls, lam: float) -> "MapSpec":
        return cls("standard", float(lam))

    @classmethod
    def rotation(cls, alpha: float = GOLDEN) -> "MapSpec":
        return cls("rotation", float(alpha))


def wrap(v):
    """Reduce onto [0, 1).  Guards the ``-tiny -> 1.0`` rounding case."""
    r = v - np.floor(v)
    if np.ndim(r) == 0:
        r = float(r)
        return 0.0 if r >= 1.0 else r
    r[r >= 1.0] = 0.0
    return r


def torus_dist(p: TorusPoint, q: TorusPoint) -> float:
    """Max-norm distance on the torus."""
    return float(np.max(torus_dist_arrays(p.x, p.y, q.x, q.y)))


def torus_dist_arrays(x1, y1, x2, y2):
    dx = wrap(np.abs(np.asarray(x1, dtype=float) - x2))
    dy = wrap(np.abs(np.asarray(y1, dtype=float) - y2))
    return np.maximum(np.minimum(dx, 1.0 - dx), np.minimum(dy, 1.0 - dy))


def standard_step(x, y, lam):
    """One standard-map step; ``lam`` may be an array broadcasting with ``x``."""
    return wrap(-y + 2.0 * x + lam * np.sin(TWO_PI * x)), x


def step_arrays(x, y, m: MapSpec):
    if m.kind == "standard":
        return standard_step(x, y, m.param)
    return wrap(x + m.param), y


def inverse_arrays(x, y, m: MapSpec):
    if m.kind == "standard":
        return y, wrap(2.0 * y + m.param * np.sin(TWO_PI * y) - x)
    return wrap(x - m.param), y


def map_step(p: TorusPoint, m: MapSpec) -> TorusPoint:
    x, y = step_arrays(p.x, p.y, m)
    return TorusPoint(float(x), float(y))


def map_inverse(p: TorusPoint, m: MapSpec) -> TorusPoint:
    x, y = inverse_arrays(p.x, p.y, m)
    return TorusPoint(float(x), float(y))


def tangent_step(p: TorusPoint, lam: float) -> np.ndarray:
    """Jacobian of the standard map at ``p``."""
    return tangent_entries(p.x, lam)


def tangent_entries(x, lam) -> np.ndarray:
    """Stacked Jacobians, shape ``x.shape + (2, 2)``."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (2, 2))
    out[..., 0, 0] = 2.0 + TWO_PI * lam * np.cos(TWO_PI * x)
    out[..., 0, 1] = -1.0
    out[..., 1, 0] = 1.0
    out[..., 1, 1] = 0.0
    return out


def orbit_arrays(p0: TorusPoint, m: MapSpec, n_from: int, n_to: int):
    """Coordinates of T^n p0 for n in [n_from, n_to] as two float arrays.

    Negative times come from the inverse map, always walked out from p0.
    """
    if n_from > n_to:
        raise ValueError("n_from must not exceed n_to")
    size = n_to - n_from + 1
    xs = np.empty(size)
    ys = np.empty(size)

    x, y = p0.x, p0.y
    for n in range(0, n_from - 1, -1):
        if n < 0:
            x, y = inverse_arrays(x, y, m)
        if n <= n_to:
            xs[n - n_from], ys[n - n_from] = x, y

    x, y = p0.x, p0.y
    for n in range(0, n_to + 1):
        if n > 0:
            x, y = step_arrays(x, y, m)
        if n >= n_from:
            xs[n - n_from], ys[n - n_from] = x, y
    return xs, ys


def orbit(p0: TorusPoint, m: MapSpec, n_from: int, n_to: int) -> list[TorusPoint]:
    xs, ys = orbit_arrays(p0, m, n_from, n_to)
    return [TorusPoint(float(a), float(b)) for a, b in zip(xs, ys)]


def uniform_points(seed: int, count: int, start: int = 0):
    """Lebesgue-uniform points on the torus, one PCG64 stream per index.

    Point ``i`` is drawn from ``PCG64(SeedSequence(seed, spawn_key=(i,)))``,
    so any subset of indices reproduces regardless of how work is split.
    """
    xs = np.empty(count)
    ys = np.empty(count)
    for j in range(count):
        ss = np.random.SeedSequence(seed, spawn_key=(start + j,))
        xs[j], ys[j] = np.random.Generator(np.random.PCG64(ss)).random(2)
    return xs, ys


def tangent_lyapunov(p0: TorusPoint, lam: float, N: int) -> float:
    """Finite-time exponent (1/N) log||prod DT(T^n p0)|| of the standard map."""
    x = np.array([p0.x])
    y = np.array([p0.y])
    return float(tangent_lyapunov_arrays(x, y, lam, N)[0])


def tangent_lyapunov_arrays(x, y, lam: float, N: int) -> np.ndarray:
    if N < 1:
        raise ValueError("N must be >= 1")
    m = MapSpec.standard(lam)
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    prod = ScaledProduct(x.shape)
    for _ in range(N):
        prod.push(tangent_entries(x, lam))
        x, y = step_arrays(x, y, m)
    return prod.log_norm() / N
