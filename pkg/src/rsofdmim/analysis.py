"""Closed-form layer: spectral efficiency, parameter-set search, the BER
lower-bound chain, and throughput."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.stats import binom as binom_dist

from .channel import sndr
from .qam_modem import Constellation
from .sim_map import index_bits_capacity


def se_rso(M: int, K: int, S: int, G: int, N_T: int, n: int | None = None) -> float:
    """Bits/s/Hz of the punctured-code scheme: (G/N_T)(K log2 M + p1)."""
    n = (M - 1) if n is None else n
    if n > M:
        raise ValueError("code length must not exceed the constellation size")
    p1 = index_bits_capacity(n, S)
    return G * (K * math.log2(M) + p1) / N_T


def se_dco(M: int, K_prime: int, G: int, N_T: int) -> float:
    """Bits/s/Hz of the coded DCO baseline: G K' log2(M) / N_T."""
    return G * K_prime * math.log2(M) / N_T


def feasible_params(M: int, K_prime: int, G: int, N_T: int,
                    n: int | None = None) -> list[tuple[int, int]]:
    """All (K, S) whose SE is at least the DCO baseline's with message K'.

    Sorted by descending S, then descending K.
    """
    n = (M - 1) if n is None else n
    if K_prime >= n:
        raise ValueError("baseline message length must satisfy K' < N")
    target = se_dco(M, K_prime, G, N_T)
    out = []
    for s in range(0, n):
        for k in range(1, n - s + 1):
            if k >= n:
                continue
            if se_rso(M, k, s, G, N_T, n=n) >= target:
                out.append((k, s))
    out.sort(key=lambda ks: (-ks[1], -ks[0]))
    return out


def p_ser_qam(M: int, sndr_value):
    """Square M-QAM symbol error probability at the given SNDR."""
    g = np.asarray(sndr_value, dtype=float)
    with np.errstate(invalid="ignore"):
        e = np.where(np.isinf(g), 0.0, special.erfc(np.sqrt(3.0 * g / (2.0 * (M - 1)))))
    a = 1.0 - 1.0 / math.sqrt(M)
    b = 1.0 - 2.0 / math.sqrt(M) + 1.0 / M
    p = 2.0 * a * e - b * e ** 2
    return float(p) if np.ndim(sndr_value) == 0 else p


def p_correct_pair(M: int, sigma_w2: float, sigma_z2: float,
                   c: Constellation) -> float:
    """Probability of telling one active subcarrier from one null."""
    s2 = sigma_w2 + sigma_z2
    if s2 <= 0:
        return 1.0
    u2 = np.abs(c.points[:M]) ** 2
    return float(1.0 - np.sum(np.exp(-u2 / (2.0 * s2))) / (2.0 * M))


def p_correct_detection(M: int, S: int, N: int, sigma_w2: float,
                        sigma_z2: float, c: Constellation) -> float:
    """P_cd: all S nulls distinguished from all N-S active subcarriers."""
    if S == 0:
        return 1.0
    return p_correct_pair(M, sigma_w2, sigma_z2, c) ** (S * (N - S))


def p_out_correct(p_s: float, N: int, K: int, S: int) -> float:
    """Decoder-output symbol error rate with the right erasure set."""
    t = (N - K - S) // 2
    v = np.arange(t + 1, N + 1)
    return float(np.sum(v / N * binom_dist.pmf(v, N, p_s)))


def p_in_wrong(r: int, N: int, S: int, p_s: float) -> float:
    """Decoder-input symbol error rate with r wrong erasures."""
    return (r + (N - S - r) * p_s) / (N - S)


def p_out_incorrect(p_s: float, N: int, K: int, S: int, p1: int) -> float:
    """Decoder-output symbol error rate with a wrong erasure set."""
    if S == 0:
        return 0.0
    t = (N - K - S) // 2
    total = 0.0
    for r in range(1, S + 1):
        pin = p_in_wrong(r, N, S, p_s)
        lo = max(t - r + 1, 0)
        v = np.arange(lo, N - r + 1)
        inner = np.sum((v + r) / N * binom_dist.pmf(v, N - r, pin))
        total += math.comb(N - S, r) * inner
    return total / (2 ** p1 - 1)


def decoder_error_rates(p_s: float, N: int, K: int, S: int, p1: int,
                        p_cd: float) -> tuple[float, float, float]:
    """(correct-erasure, wrong-erasure, combined) decoder-output symbol rates."""
    pc = p_out_correct(p_s, N, K, S)
    pinc = p_out_incorrect(p_s, N, K, S, p1)
    return pc, pinc, p_cd * pc + (1.0 - p_cd) * pinc


def p_bsim(p1: int) -> float:
    """Average index-bit error rate given a wrong puncturing vector."""
    if p1 == 0:
        return 0.0
    num = sum(t * math.comb(p1, t) for t in range(1, p1 + 1))
    return num / (p1 * (2 ** p1 - 1))


@dataclass(frozen=True)
class BoundInputs:
    M: int
    N: int
    K: int
    S: int
    G: int
    N_T: int
    beta: float
    sigma_x2: float
    sigma_z2: float
    sigma_w2: float
    a_dc: float
    h_k: float
    constellation: Constellation

    @property
    def p1(self) -> int:
        return index_bits_capacity(self.N, self.S)

    @property
    def p2(self) -> int:
        return self.K * int(math.log2(self.M))


def total_ber_bound(inputs: BoundInputs) -> tuple[float, float]:
    """Analytical lower bound on total BER, plus the index-bit error rate."""
    snd = sndr(inputs.beta, inputs.sigma_x2, inputs.sigma_z2, inputs.sigma_w2,
               a_dc=inputs.a_dc, h_k=inputs.h_k)
    p_s = p_ser_qam(inputs.M, snd)
    p_cd = p_correct_detection(inputs.M, inputs.S, inputs.N, inputs.sigma_w2,
                               inputs.sigma_z2, inputs.constellation)
    pc, pinc, _ = decoder_error_rates(p_s, inputs.N, inputs.K, inputs.S,
                                      inputs.p1, p_cd)
    bsim = p_bsim(inputs.p1)
    p1, p2 = inputs.p1, inputs.p2
    p_b = (p_cd * pc * inputs.K / (p1 + p2)
           + (1.0 - p_cd) * (pinc * inputs.K + p1 * bsim) / (p1 + p2))
    return p_b, bsim


def throughput(p_b: float, se: float) -> float:
    """Successful-bit rate per bandwidth, (1 - P_b) * SE."""
    if not 0.0 <= p_b <= 1.0:
        raise ValueError("bit error probability must be in [0, 1]")
    return (1.0 - p_b) * se
