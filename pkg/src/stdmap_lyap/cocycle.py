"""Transfer-matrix cocycles and Monte Carlo mean Lyapunov exponents.

The eigenvalue equation ``u(n+1) + u(n-1) + V(n) u(n) = E u(n)`` propagates
with ``(u(n+1), u(n)) = A_n (u(n), u(n-1))``, ``A_n = [[E - V(n), -1], [1, 0]]``.
Products apply site 1 first: ``M_N = A_N ... A_1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import MapSpec, TorusPoint
from .potential import PotentialWindow, SamplingFunction
from .products import ScaledProduct, opnorm2


def transfer_matrix(E, v) -> np.ndarray:
    """``[[E - v, -1], [1, 0]]``; broadcasts, matrix on the last two axes."""
    t = np.asarray(E, dtype=float) - np.asarray(v, dtype=float)
    out = np.empty(t.shape + (2, 2))
    out[..., 0, 0] = t
    out[..., 0, 1] = -1.0
    out[..., 1, 0] = 1.0
    out[..., 1, 1] = 0.0
    return out


@dataclass(frozen=True)
class TransferProduct:
    """``M = exp(log_scale) * m`` with ``m`` kept in factored QR form."""

    cos: float
    sin: float
    shear: float
    ratio: float
    log_scale: float
    log_det: float
    det_sign: float
    steps: int
    rescalings: int

    @classmethod
    def _from(cls, acc: ScaledProduct) -> "TransferProduct":
        return cls(float(acc.cos), float(acc.sin), float(acc.shear),
                   float(acc.ratio), float(acc.log_scale), float(acc.log_det()),
                   float(acc.det_sign()), acc.steps, acc.rescalings)

    @property
    def m(self) -> np.ndarray:
        c, s = self.cos, self.sin
        return np.array([[c, c * self.shear - s * self.ratio],
                         [s, s * self.shear + c * self.ratio]])

    def log_norm(self) -> float:
        return self.log_scale + math.log(opnorm2(1.0, self.shear, 0.0, self.ratio))

    def unimodularity(self) -> float:
        """``det(m) * exp(2 log_scale)``, one for an exact SL(2, R) product."""
        return self.det_sign * math.exp(self.log_det)

    def full(self) -> np.ndarray:
        """The represented matrix itself; overflows for long hyperbolic products."""
        return math.exp(self.log_scale) * self.m


@dataclass(frozen=True)
class LyapunovEstimate:
    E: float
    N: int
    mean: float
    stderr: float
    samples: int
    seed: int


def cocycle_product(E: float, V: PotentialWindow) -> TransferProduct:
    """``M_N(E)`` for a window covering ``[1, N]``."""
    if V.n_from > 1 or V.n_to < 1:
        raise ValueError("window must cover [1, N]")
    acc = ScaledProduct(())
    for v in V.values[1 - V.n_from:]:
        acc.push(transfer_matrix(E, v))
    return TransferProduct._from(acc)


def _exponents(energies, x, y, N: int, m: MapSpec, phi: SamplingFunction) -> np.ndarray:
    """``(1/N) log||M_N(E, x)||`` for every energy (rows) and start point (columns)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    E = np.asarray(energies, dtype=float)[:, None]
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    acc = ScaledProduct((E.shape[0], x.size))
    for _ in range(N):
        x, y = dynamics.step_arrays(x, y, m)
        acc.push(transfer_matrix(E, phi(x, y)[None, :]))
    return acc.log_norm() / N


def finite_lyapunov(E: float, x0: TorusPoint, N: int, m: MapSpec,
                    phi: SamplingFunction) -> float:
    return float(_exponents([E], [x0.x], [x0.y], N, m, phi)[0, 0])


def _reduce(E, N, values, seed) -> LyapunovEstimate:
    # fsum makes the reduction exact, hence independent of batching
    S = len(values)
    mean = math.fsum(values) / S
    var = math.fsum((v - mean) ** 2 for v in values) / (S - 1) if S > 1 else 0.0
    return LyapunovEstimate(float(E), N, mean, math.sqrt(var / S), S, seed)


def lyapunov_sweep(energies, N: int, m: MapSpec, phi: SamplingFunction,
                   samples: int, seed: int) -> list[LyapunovEstimate]:
    """Mean exponents on an energy grid, sharing one ensemble of start points."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x, y = dynamics.uniform_points(seed, samples)
    vals = _exponents(energies, x, y, N, m, phi)
    return [_reduce(E, N, row.tolist(), seed) for E, row in zip(energies, vals)]


def mean_lyapunov(E: float, N: int, m: MapSpec, phi: SamplingFunction,
                  samples: int, seed: int) -> LyapunovEstimate:
    """Monte Carlo estimate of the Lebesgue-averaged exponent at energy ``E``."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    return lyapunov_sweep([E], N, m, phi, samples, seed)[0]


def free_exponent(E):
    """Closed-form exponent of the zero potential: ``max(0, arccosh(|E|/2))``."""
    a = np.abs(np.asarray(E, dtype=float)) / 2.0
    return np.where(a > 1.0, np.arccosh(np.maximum(a, 1.0)), 0.0)


@dataclass(frozen=True)
class HermanReport:
    kappa: float
    floor: float
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def herman_floor_check(sweep: list[LyapunovEstimate], kappa: float,
                       bias: float = 0.02) -> HermanReport:
    """Flag estimates below ``log(kappa) - 3 stderr - bias``.

    For the potential ``2 kappa cos(2 pi x)`` over an irrational rotation the
    exponent is at least ``log(kappa)`` at every energy.
    """
    if kappa <= 1.0:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    floor = math.log(kappa)
    bad = [est for est in sweep if est.mean < floor - 3.0 * est.stderr - bias]
    return HermanReport(kappa, floor, bad)
