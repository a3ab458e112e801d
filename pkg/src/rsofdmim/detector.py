"""Receiver chain: LLR null-subcarrier detection, puncture-vector estimation,
demapping, erasure-aided RS decoding, and bit recovery."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .qam_modem import Constellation, qam_demap_hard
from .rs_code import CodeParams, DecodeFailure, rs_decode, syndromes_batch
from .sim_map import puncture_to_bits

SIGMA_FLOOR = 1e-30


@dataclass(frozen=True)
class ReceiverChain:
    code: CodeParams
    constellation: Constellation
    sigma_w2: float
    sigma_z2: float
    beta: float = 1.0
    noise_mode: str = "with_sigma_z"

    def __post_init__(self):
        if self.noise_mode not in ("with_sigma_z", "printed"):
            raise ValueError("noise_mode must be 'with_sigma_z' or 'printed'")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must be in (0, 1]")

    @property
    def sigma_eff2(self) -> float:
        """Detector noise variance after Bussgang gain compensation."""
        s2 = self.sigma_w2
        if self.noise_mode == "with_sigma_z":
            s2 = s2 + self.sigma_z2
        return max(s2 / self.beta ** 2, SIGMA_FLOOR)


@dataclass
class SubBlockDecision:
    theta_hat: tuple
    index_value: int
    message: np.ndarray
    decode_failed: bool
    pi_g: int | None = None
    symbol_errors_in: int | None = None


def llr(y, sigma_w2: float, sigma_z2: float, c: Constellation,
        n_sub: int, s_active: int):
    """Null-vs-active log ratio per bin:
    ln S - ln(N-S) + |Y|^2/sigma_eff^2 + lse_m(-|Y-u_m|^2/sigma_eff^2)."""
    if not 1 <= s_active < n_sub:
        raise ValueError("need 1 <= S < N")
    sigma_eff2 = max(sigma_w2 + sigma_z2, SIGMA_FLOOR)
    y = np.asarray(y, dtype=complex)
    d2 = np.abs(y[..., None] - c.points) ** 2
    lse = logsumexp(-d2 / sigma_eff2, axis=-1)
    return (np.log(s_active) - np.log(n_sub - s_active)
            + np.abs(y) ** 2 / sigma_eff2 + lse)


def estimate_puncture(alpha, s_active: int) -> tuple:
    """1-based indices of the S smallest LLRs; ties go to the smaller index."""
    alpha = np.asarray(alpha)
    order = np.argsort(alpha, kind="stable")[:s_active]
    return tuple(sorted(int(i) + 1 for i in order))


def receive_frame(bins: np.ndarray, chain: ReceiverChain,
                  truth=None) -> list[SubBlockDecision]:
    """Vectorized receiver over G sub-blocks of N bins each.

    truth, when given, is a list of (theta, codeword) pairs used to fill the
    per-sub-block diagnostics.
    """
    p = chain.code
    n, s, k = p.N, p.S, p.K
    bins = np.asarray(bins, dtype=complex)
    if bins.ndim != 2 or bins.shape[1] != n:
        raise ValueError("expected (G, N) bins")
    g_count = bins.shape[0]
    y = bins / chain.beta
    sigma_eff2 = chain.sigma_eff2

    if s >= 1:
        d2 = np.abs(y[:, :, None] - chain.constellation.points) ** 2
        lse = logsumexp(-d2 / sigma_eff2, axis=-1)
        alpha = (np.log(s) - np.log(n - s)
                 + np.abs(y) ** 2 / sigma_eff2 + lse)
        order = np.argsort(alpha, axis=1, kind="stable")[:, :s]
        erased = np.zeros((g_count, n), dtype=bool)
        np.put_along_axis(erased, order, True, axis=1)
    else:
        erased = np.zeros((g_count, n), dtype=bool)

    symbols = qam_demap_hard(y, chain.constellation,
                             alphabet_size=p.field.order)
    words = np.where(erased, 0, symbols)
    synd = syndromes_batch(words, p)

    decisions = []
    for g in range(g_count):
        theta_hat = tuple(int(i) + 1 for i in np.flatnonzero(erased[g]))
        index_value = puncture_to_bits(theta_hat, n, s)
        try:
            message = rs_decode(words[g], theta_hat, p, syndromes=synd[g])
            failed = False
        except DecodeFailure:
            message = words[g, :k].copy()
            failed = True
        dec = SubBlockDecision(theta_hat=theta_hat, index_value=index_value,
                               message=message, decode_failed=failed)
        if truth is not None:
            theta_true, codeword = truth[g]
            dec.pi_g = len(set(theta_true) ^ set(theta_hat)) // 2
            active = ~erased[g]
            dec.symbol_errors_in = int(
                np.count_nonzero(words[g, active] != np.asarray(codeword)[active]))
        decisions.append(dec)
    return decisions


def receive_subblock(y_g, chain: ReceiverChain, truth=None) -> SubBlockDecision:
    """Single sub-block receiver; see receive_frame."""
    wrapped = None if truth is None else [truth]
    return receive_frame(np.asarray(y_g, dtype=complex)[None, :], chain,
                         truth=wrapped)[0]
