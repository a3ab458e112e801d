"""Closed-form chain: exact rationals, fraction-arithmetic oracles, edges."""

import math
from fractions import Fraction

import numpy as np
import pytest

from rsofdmim.analysis import (BoundInputs, decoder_error_rates,
                               feasible_params, p_bsim, p_correct_detection,
                               p_correct_pair, p_in_wrong, p_out_correct,
                               p_out_incorrect, p_ser_qam, se_dco, se_rso,
                               throughput, total_ber_bound)
from rsofdmim.optical_frontend import q_func
from rsofdmim.qam_modem import make_constellation

C4 = make_constellation(4)
C32 = make_constellation(32)


def test_se_exact_rationals():
    assert se_rso(32, 19, 2, 16, 1024) == 1.609375
    assert se_rso(32, 19, 4, 16, 1024) == 1.703125
    assert se_rso(32, 19, 5, 16, 1024) == 1.75
    assert se_rso(32, 19, 6, 16, 1024) == 1.78125
    assert se_rso(32, 25, 2, 16, 1024) == 2.078125
    assert se_rso(32, 25, 4, 16, 1024) == 2.171875
    assert se_rso(32, 25, 6, 16, 1024) == 2.25
    assert se_rso(32, 23, 5, 16, 1024) == 2.0625
    assert se_rso(32, 23, 6, 16, 1024) == 2.09375
    assert se_dco(32, 26, 16, 1024) == 2.03125
    assert se_dco(32, 22, 16, 1024) == 1.71875


def test_se_rso_rejects_oversized_code():
    with pytest.raises(ValueError):
        se_rso(4, 2, 1, 2, 64, n=7)


def test_feasible_params_matches_baseline():
    pairs = feasible_params(32, 26, 16, 1024)
    assert (23, 5) in pairs and (23, 6) in pairs
    target = se_dco(32, 26, 16, 1024)
    assert all(se_rso(32, k, s, 16, 1024) >= target for k, s in pairs)
    ss = [s for _, s in pairs]
    assert ss == sorted(ss, reverse=True)
    pairs22 = feasible_params(32, 22, 16, 1024)
    for want in [(19, 5), (19, 6), (20, 3), (18, 7)]:
        assert want in pairs22
    assert (19, 2) not in pairs22  # se 1.609375 < 1.71875
    with pytest.raises(ValueError):
        feasible_params(32, 31, 16, 1024)


def test_p_ser_edges():
    assert p_ser_qam(4, np.inf) == 0.0
    assert abs(p_ser_qam(4, 0.0) - 0.75) < 1e-15
    assert abs(p_ser_qam(16, 0.0) - 15.0 / 16.0) < 1e-15
    grid = p_ser_qam(32, np.array([1.0, 10.0, 100.0]))
    assert grid.shape == (3,) and np.all(np.diff(grid) < 0)


def test_p_ser_qpsk_matches_monte_carlo():
    g = 4.0
    rng = np.random.default_rng(31)
    n = 200_000
    labels = rng.integers(0, 4, size=n)
    noise = rng.normal(0.0, math.sqrt(1.0 / (2.0 * g)), size=(n, 2))
    y = C4.points[labels] + noise[:, 0] + 1j * noise[:, 1]
    d2 = np.abs(y[:, None] - C4.points) ** 2
    ser = np.mean(np.argmin(d2, axis=1) != labels)
    assert abs(p_ser_qam(4, g) - ser) / ser < 0.05


def test_p_correct_pair_closed_value():
    val = p_correct_pair(4, 0.3, 0.2, C4)
    assert abs(val - (1.0 - math.exp(-1.0) / 2.0)) < 1e-12
    assert p_correct_pair(4, 0.0, 0.0, C4) == 1.0


def test_p_correct_detection_structure():
    pair = p_correct_pair(32, 0.004, 0.003, C32)
    for s in (1, 2, 6):
        assert p_correct_detection(32, s, 31, 0.004, 0.003, C32) == \
            pytest.approx(pair ** (s * (31 - s)), rel=1e-12)
    assert p_correct_detection(32, 0, 31, 0.004, 0.003, C32) == 1.0
    assert p_correct_detection(32, 4, 31, 0.004, 0.003, C32) < \
        p_correct_detection(32, 2, 31, 0.004, 0.003, C32)


def _pmf(v, n, p):
    return math.comb(n, v) * p ** v * (1 - p) ** (n - v)


def test_p_out_correct_fraction_oracle():
    n, k, s = 15, 9, 2
    t = (n - k - s) // 2
    p = Fraction(1, 10)
    exact = sum(Fraction(v, n) * _pmf(v, n, p) for v in range(t + 1, n + 1))
    assert abs(p_out_correct(0.1, n, k, s) - float(exact)) < 1e-12
    assert p_out_correct(0.0, n, k, s) == 0.0


def test_p_in_wrong_hand_value():
    assert p_in_wrong(1, 15, 2, 0.1) == pytest.approx(2.2 / 13.0, rel=1e-12)
    assert p_in_wrong(2, 15, 2, 0.0) == pytest.approx(2.0 / 13.0, rel=1e-12)


def test_p_out_incorrect_fraction_oracle():
    n, k, s, p1 = 15, 9, 2, 6
    t = (n - k - s) // 2
    p = Fraction(1, 20)
    exact = Fraction(0)
    for r in range(1, s + 1):
        pin = Fraction(r + (n - s - r) * p, n - s)
        for v in range(max(t - r + 1, 0), n - r + 1):
            exact += math.comb(n - s, r) * Fraction(v + r, n) * _pmf(v, n - r, pin)
    exact /= 2 ** p1 - 1
    assert abs(p_out_incorrect(0.05, n, k, s, p1) - float(exact)) < 1e-12
    assert p_out_incorrect(0.05, n, k, 0, p1) == 0.0


def test_decoder_error_rates_combination():
    pc, pinc, combined = decoder_error_rates(0.02, 31, 19, 4, 14, 0.99)
    assert pc == pytest.approx(p_out_correct(0.02, 31, 19, 4), rel=1e-12)
    assert pinc == pytest.approx(p_out_incorrect(0.02, 31, 19, 4, 14), rel=1e-12)
    assert combined == pytest.approx(0.99 * pc + 0.01 * pinc, rel=1e-9)


def test_p_bsim_values():
    assert p_bsim(0) == 0.0
    assert p_bsim(1) == 1.0
    assert p_bsim(2) == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert p_bsim(12) == pytest.approx(2048.0 / 4095.0, rel=1e-15)


def _inputs(sigma_w2, sigma_z2=0.0, beta=1.0, s=2):
    return BoundInputs(M=32, N=31, K=19, S=s, G=16, N_T=1024, beta=beta,
                       sigma_x2=1.0, sigma_z2=sigma_z2, sigma_w2=sigma_w2,
                       a_dc=1.0, h_k=1.0, constellation=C32)


def test_bound_inputs_bit_counts():
    bi = _inputs(0.01)
    assert bi.p1 == 8
    assert bi.p2 == 95
    assert _inputs(0.01, s=6).p1 == 19


def test_total_bound_zero_noise_is_zero():
    p_b, bsim = total_ber_bound(_inputs(0.0))
    assert p_b == 0.0
    assert bsim == p_bsim(8)


def test_total_bound_composition():
    bi = _inputs(0.003, sigma_z2=0.004, beta=0.96)
    from rsofdmim.channel import sndr
    snd = sndr(bi.beta, bi.sigma_x2, bi.sigma_z2, bi.sigma_w2)
    p_s = p_ser_qam(32, snd)
    p_cd = p_correct_detection(32, bi.S, bi.N, bi.sigma_w2, bi.sigma_z2, C32)
    pc = p_out_correct(p_s, bi.N, bi.K, bi.S)
    pinc = p_out_incorrect(p_s, bi.N, bi.K, bi.S, bi.p1)
    hand = (p_cd * pc * bi.K / (bi.p1 + bi.p2)
            + (1 - p_cd) * (pinc * bi.K + bi.p1 * p_bsim(bi.p1))
            / (bi.p1 + bi.p2))
    p_b, _ = total_ber_bound(bi)
    assert p_b == pytest.approx(hand, rel=1e-12)


def test_total_bound_monotone_in_noise():
    lo, _ = total_ber_bound(_inputs(0.001))
    hi, _ = total_ber_bound(_inputs(0.01))
    assert 0 < lo < hi


def test_throughput():
    assert throughput(0.0, 2.0) == 2.0
    assert throughput(1.0, 2.0) == 0.0
    assert throughput(0.5, 2.0) == 1.0
    with pytest.raises(ValueError):
        throughput(-0.1, 1.0)
    with pytest.raises(ValueError):
        throughput(1.1, 1.0)


def test_q_func_consistency_with_p_ser():
    # square 4-QAM: p = 1 - (1 - Q(sqrt(g)))^2 at unit energy
    g = 9.0
    q = q_func(math.sqrt(g))
    assert p_ser_qam(4, g) == pytest.approx(1 - (1 - q) ** 2, rel=1e-9)
