"""Finite sections of ``H = V + Delta``, their spectra and diagonal resolvents.

``Delta`` is the nearest-neighbour hopping (off-diagonal ones, no diagonal
shift), matching the transfer matrices in :mod:`stdmap_lyap.cocycle`.

Two boundary treatments are available for resolvents:

``dirichlet``
    plain truncation of the matrix;
``transparent``
    semi-infinite free chains attached at both ends, entering as the exact
    surface self-energy.  The free potential then reproduces the whole-line
    resolvent at any ``eps``, which plain truncation cannot do once ``eps``
    drops below the level spacing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cocycle import LyapunovEstimate
from .potential import PotentialWindow

BOUNDARIES = ("dirichlet", "transparent")


@dataclass(frozen=True)
class JacobiWindow:
    diagonal: np.ndarray
    n_from: int = 0
    boundary: str = "dirichlet"

    def __post_init__(self):
        object.__setattr__(self, "diagonal", np.asarray(self.diagonal, dtype=float))
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")

    @property
    def size(self) -> int:
        return self.diagonal.size

    @property
    def n_to(self) -> int:
        return self.n_from + self.size - 1

    def dense(self) -> np.ndarray:
        """Dirichlet matrix as a dense array (for small cross-checks)."""
        return (np.diag(self.diagonal) + np.diag(np.ones(self.size - 1), 1)
                + np.diag(np.ones(self.size - 1), -1))


@dataclass(frozen=True)
class ComplexEnergy:
    E: float
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    @property
    def z(self) -> complex:
        return complex(self.E, self.eps)


@dataclass(frozen=True)
class DefectReport:
    A_grid: np.ndarray
    site_defect: np.ndarray   # max over the grid of |Re G|, per center site
    sites: tuple              # (first, last) absolute index of the center window
    eps: float
    re_g: np.ndarray          # Re G, shape (len(A_grid), center sites)
    im_g: np.ndarray
    boundary: str

    @property
    def defect(self) -> float:
        return float(self.site_defect.max())


def finite_section(V: PotentialWindow, boundary: str = "dirichlet") -> JacobiWindow:
    return JacobiWindow(V.values.copy(), V.n_from, boundary)


def sturm_count(diagonal, x) -> np.ndarray:
    """Number of eigenvalues strictly below each ``x`` (unit off-diagonals)."""
    x = np.asarray(x, dtype=float)
    count = np.zeros(x.shape, dtype=int)
    q = np.ones(x.shape)
    tiny = np.finfo(float).tiny
    for i, d in enumerate(diagonal):
        q = d - x - (1.0 / q if i else 0.0)
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def eigenvalues(H: JacobiWindow, tol: float = 1e-10) -> np.ndarray:
    """All Dirichlet eigenvalues, ascending, by Sturm-sequence bisection."""
    d = H.diagonal
    n = d.size
    lo = np.full(n, d.min() - 2.0 - tol)
    hi = np.full(n, d.max() + 2.0 + tol)
    k = np.arange(n)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = sturm_count(d, mid) > k
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    return 0.5 * (lo + hi)


def lead_surface_green(z):
    """Surface element of ``(H_lead - z)^{-1}`` for a free half-infinite chain."""
    z = np.asarray(z, dtype=complex)
    root = np.sqrt(z * z - 4.0)
    g = (-z + root) / 2.0
    # the two roots multiply to one; the decaying one is the physical branch
    # (Im g > 0 above the real axis, its conjugate below)
    return np.where(np.abs(g) < 1.0, g, (-z - root) / 2.0)


def green_diagonals(H: JacobiWindow, z) -> np.ndarray:
    """Diagonal of ``(H - z)^{-1}``, shape ``(len(z), H.size)``.

    Left and right Schur complements are swept in one pass each, so the cost
    is linear in the window size.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    D = H.diagonal[None, :] - z[:, None]
    n = H.size
    edge = lead_surface_green(z) if H.boundary == "transparent" else np.zeros_like(z)
    left = np.empty_like(D)
    right = np.empty_like(D)
    left[:, 0] = D[:, 0] - edge
    for i in range(1, n):
        left[:, i] = D[:, i] - 1.0 / left[:, i - 1]
    right[:, n - 1] = D[:, n - 1] - edge
    for i in range(n - 2, -1, -1):
        right[:, i] = D[:, i] - 1.0 / right[:, i + 1]
    return 1.0 / (left + right - D)


def green_diagonal(H: JacobiWindow, z: ComplexEnergy, n: int) -> complex:
    """``((H - z)^{-1})(n, n)`` at absolute site ``n``."""
    if not isinstance(z, ComplexEnergy):
        raise TypeError("z must be a ComplexEnergy")
    if not H.n_from <= n <= H.n_to:
        raise IndexError(f"site {n} outside [{H.n_from}, {H.n_to}]")
    return complex(green_diagonals(H, [z.z])[0, n - H.n_from])


def reflectionless_defect(V: PotentialWindow, A_grid, eps: float, center_width: int,
                          boundary: str = "transparent") -> DefectReport:
    """Largest ``|Re G(t + i eps)(n, n)|`` over ``t`` in the grid and central sites."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if center_width < 1 or center_width > len(V) // 2:
        raise ValueError("center_width must be in [1, window size / 2]")
    A = np.asarray(A_grid, dtype=float)
    H = finite_section(V, boundary)
    G = green_diagonals(H, A + 1j * eps)
    first = (len(V) - center_width) // 2
    G = G[:, first:first + center_width]
    re = G.real
    return DefectReport(A, np.abs(re).max(axis=0),
                        (V.n_from + first, V.n_from + first + center_width - 1),
                        eps, re, G.imag, boundary)


def zero_exponent_set(sweep: list[LyapunovEstimate], threshold: float) -> list[tuple]:
    """Maximal runs of consecutive grid energies with mean below ``threshold``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    intervals = []
    run = None
    for est in sweep:
        if est.mean < threshold:
            run = (run[0], est.E) if run else (est.E, est.E)
        elif run:
            intervals.append(run)
            run = None
    if run:
        intervals.append(run)
    return intervals
