"""Overflow-safe products of 2x2 matrices (QR / Benettin renormalization).

A running product ``P = A_N ... A_1`` is kept as ``P = Q R`` with ``Q`` a
rotation and ``R = [[r11, r12], [0, r22]]``.  Only normalized quantities are
stored as floats:

* the rotation angle, as ``(cos, sin)``;
* ``shear = r12 / r11`` and ``ratio = r22 / r11``;
* ``log r11`` and ``log |r22|`` (plus the sign of ``r22``) as accumulated logs.

``log r11`` is the ``log_scale`` of the product: ``P = exp(log_scale) * m``
with ``m = Q [[1, shear], [0, ratio]]``, whose entries stay O(1).  Because
``det P = r11 * r22`` is carried in log form, ``det(m) * exp(2 log_scale)``
can be evaluated without the catastrophic cancellation that ``ad - bc``
suffers on a nearly rank-one matrix.

Every array is elementwise, so results for one element never depend on what
else is in the batch.
"""
from __future__ import annotations

import numpy as np

RESCALE_AT = 1e8


def opnorm2(a, b, c, d):
    """Operator 2-norm of ``[[a, b], [c, d]]`` in closed form."""
    s = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = np.sqrt(np.maximum(s * s - 4.0 * det * det, 0.0))
    return np.sqrt(0.5 * (s + disc))


class ScaledProduct:
    """Vectorized left-multiplying accumulator; ``shape`` is the batch shape."""

    def __init__(self, shape=()):
        self.cos = np.ones(shape)
        self.sin = np.zeros(shape)
        self.shear = np.zeros(shape)
        self.ratio = np.ones(shape)
        self.log_r11 = np.zeros(shape)
        self.log_r22 = np.zeros(shape)
        self.sign = np.ones(shape)
        # factors not yet folded into the logs
        self._g11 = np.ones(shape)
        self._g22 = np.ones(shape)
        self.steps = 0
        self.rescalings = 0

    def push(self, t):
        """Left-multiply by ``t`` (shape ``batch + (2, 2)``, broadcastable)."""
        t00 = t[..., 0, 0]
        t01 = t[..., 0, 1]
        t10 = t[..., 1, 0]
        t11 = t[..., 1, 1]
        c, s = self.cos, self.sin
        # C = t @ [[c, -s], [s, c]]
        c11 = t00 * c + t01 * s
        c21 = t10 * c + t11 * s
        c12 = t01 * c - t00 * s
        c22 = t11 * c - t10 * s
        r11 = np.hypot(c11, c21)
        cn = c11 / r11
        sn = c21 / r11
        r12 = cn * c12 + sn * c22
        r22 = cn * c22 - sn * c12
        inv = 1.0 / r11
        self.cos = cn
        self.sin = sn
        self.shear = self.shear + r12 * inv * self.ratio
        self.ratio = self.ratio * (r22 * inv)
        self._g11 = self._g11 * r11
        self._g22 = self._g22 * r22
        self.steps += 1

        g = self._g11
        big = (g > RESCALE_AT) | (g < 1.0 / RESCALE_AT)
        if big.any():
            self._fold(big)

    def _fold(self, mask):
        g11 = np.where(mask, self._g11, 1.0)
        g22 = np.where(mask, self._g22, 1.0)
        self.log_r11 = self.log_r11 + np.log(g11)
        self.log_r22 = self.log_r22 + np.log(np.abs(g22))
        self.sign = self.sign * np.sign(g22)
        self._g11 = np.where(mask, 1.0, self._g11)
        self._g22 = np.where(mask, 1.0, self._g22)
        self.rescalings += 1

    # readouts include the unfolded factors but leave state untouched

    @property
    def log_scale(self):
        return self.log_r11 + np.log(self._g11)

    def log_det(self):
        """``log |det P|``; exactly zero for an exact SL(2, R) product."""
        return self.log_scale + self.log_r22 + np.log(np.abs(self._g22))

    def det_sign(self):
        return self.sign * np.sign(self._g22)

    def unimodularity(self):
        """``det(m) * exp(2 log_scale)``, i.e. ``det P``."""
        return self.det_sign() * np.exp(self.log_det())

    def matrix(self):
        """The normalized factor ``m`` with entries on the last two axes."""
        c, s = self.cos, self.sin
        out = np.empty(np.shape(c) + (2, 2))
        out[..., 0, 0] = c
        out[..., 1, 0] = s
        out[..., 0, 1] = c * self.shear - s * self.ratio
        out[..., 1, 1] = s * self.shear + c * self.ratio
        return out

    def log_norm(self):
        """``log ||P||`` in the operator 2-norm."""
        # Q is orthogonal, so ||m|| = ||[[1, shear], [0, ratio]]||
        return self.log_scale + np.log(
            opnorm2(1.0, self.shear, 0.0, self.ratio))
