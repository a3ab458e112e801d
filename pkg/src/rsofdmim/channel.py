"""AWGN channel, zero-forcing equalization, and SNDR accounting.

SNR conventions (per real time-domain sample):
  snr_l: sigma_ref^2 / sigma_w^2, referenced to the unclipped signal power
         with no puncturing applied.
  snr_t: (sigma_ref^2 + I_bias^2) / sigma_w^2, transmit power including bias
         (the clipped signal power is approximated by the unclipped one).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseSpec:
    sigma_w2: float

    def __post_init__(self):
        if self.sigma_w2 < 0:
            raise ValueError("noise variance must be nonnegative")


def noise_variance(snr_db: float, reference: str, sigma_ref2: float,
                   i_bias: float = 0.0) -> float:
    """Per-sample AWGN variance for an SNR point under the given reference."""
    snr = 10.0 ** (snr_db / 10.0)
    if reference == "snr_l":
        return sigma_ref2 / snr
    if reference == "snr_t":
        return (sigma_ref2 + i_bias ** 2) / snr
    raise ValueError("reference must be 'snr_l' or 'snr_t'")


def transmit(x: np.ndarray, h=None, sigma_w2: float = 0.0,
             rng: np.random.Generator | None = None) -> np.ndarray:
    """y = x * h + w with real white Gaussian noise of variance sigma_w2."""
    y = np.asarray(x, dtype=float)
    if h is not None:
        h = np.atleast_1d(np.asarray(h, dtype=float))
        if h.size == 1:
            y = y * h[0]
        else:
            y = np.convolve(y, h)[: y.size]
    if sigma_w2 > 0:
        if rng is None:
            raise ValueError("a seeded Generator is required when noise is on")
        y = y + rng.normal(0.0, np.sqrt(sigma_w2), size=y.shape)
    return y


def equalize_zf(bins: np.ndarray, gains) -> tuple[np.ndarray, np.ndarray]:
    """Y_k / H_k plus the per-bin noise variance scaling 1/|H_k|^2."""
    gains = np.broadcast_to(np.asarray(gains), np.asarray(bins).shape)
    if np.any(gains == 0):
        raise ValueError("zero channel gain on a used bin")
    return np.asarray(bins) / gains, 1.0 / np.abs(gains) ** 2


def dc_attenuation(sigma_x2: float, i_bias: float) -> float:
    """Electrical power penalty of the DC bias, (sigma_x^2 + I_bias^2)/sigma_x^2."""
    return (sigma_x2 + i_bias ** 2) / sigma_x2


def sndr(beta: float, sigma_x2: float, sigma_z2: float, sigma_w2: float,
         a_dc: float = 1.0, h_k=1.0):
    """Per-subcarrier SNDR: beta^2 / (sigma_z^2/sigma_x^2 + A_DC/(SNR_l |H_k|^2))."""
    h2 = np.abs(np.asarray(h_k, dtype=float)) ** 2
    dist = sigma_z2 / sigma_x2
    with np.errstate(divide="ignore"):
        awgn = np.where(sigma_w2 > 0, a_dc * sigma_w2 / (sigma_x2 * h2), 0.0)
        out = np.where(dist + awgn > 0, beta ** 2 / (dist + awgn), np.inf)
    if np.ndim(h_k) == 0:
        return float(out)
    return out
