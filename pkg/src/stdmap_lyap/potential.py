"""Dynamically defined potentials, the shift, the weighted metric and recurrence.

A potential is sampled along an orbit as ``V(n) = phi(T^n x0)``.  Windows carry
their absolute index range so shifts and comparisons keep track of time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import MapSpec, TorusPoint


@dataclass(frozen=True)
class SamplingFunction:
    """First-harmonic trigonometric observable on the torus.

    ``phi(x, y) = c0 + a_c cos 2pi x + a_s sin 2pi x + b_c cos 2pi y + b_s sin 2pi y``
    """

    c0: float = 0.0
    a_c: float = 0.0
    a_s: float = 0.0
    b_c: float = 0.0
    b_s: float = 0.0

    def __call__(self, x, y):
        tx = dynamics.TWO_PI * np.asarray(x, dtype=float)
        v = self.c0 + np.zeros_like(tx)
        if self.a_c:
            v = v + self.a_c * np.cos(tx)
        if self.a_s:
            v = v + self.a_s * np.sin(tx)
        if self.b_c or self.b_s:
            ty = dynamics.TWO_PI * np.asarray(y, dtype=float)
            if self.b_c:
                v = v + self.b_c * np.cos(ty)
            if self.b_s:
                v = v + self.b_s * np.sin(ty)
        return v

    @property
    def sup_bound(self) -> float:
        return (abs(self.c0) + abs(self.a_c) + abs(self.a_s)
                + abs(self.b_c) + abs(self.b_s))

    @property
    def is_constant(self) -> bool:
        return not (self.a_c or self.a_s or self.b_c or self.b_s)

    @classmethod
    def cosine(cls, amplitude: float = 1.0) -> "SamplingFunction":
        return cls(a_c=amplitude)


@dataclass(frozen=True)
class PotentialWindow:
    n_from: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("a window needs a non-empty 1-d value array")

    @property
    def n_to(self) -> int:
        return self.n_from + self.values.size - 1

    def __len__(self):
        return self.values.size

    def __getitem__(self, n: int) -> float:
        if not self.n_from <= n <= self.n_to:
            raise IndexError(f"index {n} outside [{self.n_from}, {self.n_to}]")
        return float(self.values[n - self.n_from])

    def restrict(self, n_from: int, n_to: int) -> "PotentialWindow":
        if n_from < self.n_from or n_to > self.n_to or n_from > n_to:
            raise IndexError(f"[{n_from}, {n_to}] not inside [{self.n_from}, {self.n_to}]")
        lo = n_from - self.n_from
        return PotentialWindow(n_from, self.values[lo:lo + n_to - n_from + 1])


@dataclass(frozen=True)
class RecurrenceEvent:
    time: int
    distance: float


def sample_potential(x0: TorusPoint, m: MapSpec, phi: SamplingFunction,
                     n_from: int, n_to: int) -> PotentialWindow:
    xs, ys = dynamics.orbit_arrays(x0, m, n_from, n_to)
    return PotentialWindow(n_from, phi(xs, ys))


def shift(V: PotentialWindow, k: int) -> PotentialWindow:
    """``(S^k V)(n) = V(n + k)``."""
    return PotentialWindow(V.n_from - k, V.values)


def shift_metric(V: PotentialWindow, W: PotentialWindow) -> float:
    """``sum 2^{-|n|} |V(n) - W(n)|`` over the common index range."""
    lo = max(V.n_from, W.n_from)
    hi = min(V.n_to, W.n_to)
    if lo > hi:
        raise ValueError("windows share no index")
    n = np.arange(lo, hi + 1)
    diff = np.abs(V.values[lo - V.n_from:hi - V.n_from + 1]
                  - W.values[lo - W.n_from:hi - W.n_from + 1])
    return float(np.sum(np.ldexp(diff, -np.abs(n))))


def truncation_bound(C: float, K: int) -> float:
    """Largest possible tail of the metric outside ``[-K, K]`` for ``sup|V| <= C``."""
    return 4.0 * C * 2.0 ** (-K)


def near_recurrences(x0: TorusPoint, m: MapSpec, delta: float,
                     horizon: int) -> list[RecurrenceEvent]:
    """Every time ``n`` in ``[1, horizon]`` with ``dist(T^n x0, x0) < delta``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    xs, ys = dynamics.orbit_arrays(x0, m, 1, horizon)
    d = dynamics.torus_dist_arrays(xs, ys, x0.x, x0.y)
    hits = np.flatnonzero(d < delta)
    return [RecurrenceEvent(int(i) + 1, float(d[i])) for i in hits]


def recurrence_found(x, y, m: MapSpec, delta: float, horizon: int) -> np.ndarray:
    """Vectorized: does each start point return within ``delta`` by ``horizon``?"""
    x0 = np.array(x, dtype=float)
    y0 = np.array(y, dtype=float)
    found = np.zeros(x0.shape, dtype=bool)
    xc, yc = x0.copy(), y0.copy()
    for n in range(1, horizon + 1):
        xc, yc = dynamics.step_arrays(xc, yc, m)
        found |= dynamics.torus_dist_arrays(xc, yc, x0, y0) < delta
        if n % 256 == 0 and found.all():
            break
    return found


def omega_limit_witness(x0: TorusPoint, m: MapSpec, phi: SamplingFunction,
                        events: list[RecurrenceEvent], K: int):
    """Window ``W(k) = phi(T^k x0)`` on ``[-K, K]`` and its distance to each return.

    ``defects[j]`` compares ``W`` with ``k -> phi(T^{n_j + k} x0)``; small
    defects along returns with shrinking distance witness ``W`` as a limit
    point of the shifted potentials.
    """
    if not events:
        raise ValueError("need at least one recurrence event")
    if K < 1:
        raise ValueError("K must be >= 1")
    last = max(e.time for e in events)
    full = sample_potential(x0, m, phi, -K, last + K)
    W = full.restrict(-K, K)
    defects = []
    for e in events:
        moved = shift(full.restrict(e.time - K, e.time + K), e.time)
        defects.append(shift_metric(W, moved))
    return W, defects


def default_phi() -> SamplingFunction:
    return SamplingFunction.cosine(1.0)

