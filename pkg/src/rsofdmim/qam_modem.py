"""M-ary QAM constellations with unit average symbol energy.

Square orders (4, 16, 64) use per-axis Gray labeling.  M = 32 is the cross
constellation (6x6 grid minus corners): labels come from a Gray-coded 8x4
rectangle whose outer columns fold into the cross wings, giving a quasi-Gray
map.  Field symbols index constellation labels directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Constellation:
    M: int
    points: np.ndarray  # complex, indexed by label


def _gray(v: int) -> int:
    return v ^ (v >> 1)


def _square_qam(M: int) -> np.ndarray:
    side = int(round(M ** 0.5))
    bits_per_axis = side.bit_length() - 1
    pts = np.zeros(M, dtype=complex)
    for i in range(side):
        for q in range(side):
            label = (_gray(i) << bits_per_axis) | _gray(q)
            pts[label] = (2 * i - (side - 1)) + 1j * (2 * q - (side - 1))
    scale = np.sqrt(2.0 * (M - 1) / 3.0)
    return pts / scale


def _cross_32() -> np.ndarray:
    pts = np.zeros(32, dtype=complex)
    for x in range(8):  # I levels -7..7 of the rectangle
        for y in range(4):  # Q levels -3..3
            label = (_gray(x) << 2) | _gray(y)
            i_r = 2 * x - 7
            q_r = 2 * y - 3
            if abs(i_r) == 7:  # outer column folds into the wing rows Q = +-5
                sign_i = 1 if i_r > 0 else -1
                sign_q = 1 if q_r > 0 else -1
                i_r = sign_i * abs(q_r)
                q_r = sign_q * 5
            pts[label] = i_r + 1j * q_r
    energy = np.mean(np.abs(pts) ** 2)
    return pts / np.sqrt(energy)


def make_constellation(M: int) -> Constellation:
    if M == 32:
        pts = _cross_32()
    elif M in (4, 16, 64):
        pts = _square_qam(M)
    else:
        raise ValueError("supported orders: 4, 16, 32, 64")
    return Constellation(M, pts)


def qam_map(symbol, c: Constellation):
    """Label(s) -> complex constellation point(s)."""
    symbol = np.asarray(symbol)
    if np.any(symbol < 0) or np.any(symbol >= c.M):
        raise ValueError("symbol label out of range")
    return c.points[symbol]


def qam_demap_hard(y, c: Constellation, alphabet_size: int | None = None):
    """Nearest-point hard decision; ties break toward the lowest label.

    `alphabet_size` restricts the decision to the first labels (used when the
    field alphabet is smaller than M).
    """
    pts = c.points if alphabet_size is None else c.points[:alphabet_size]
    y = np.asarray(y, dtype=complex)
    d2 = np.abs(y[..., None] - pts) ** 2
    return np.argmin(d2, axis=-1)
