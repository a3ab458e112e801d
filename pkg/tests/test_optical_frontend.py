"""Clipped-Gaussian statistics against Monte Carlo; dimming bias inversion."""

import math

import numpy as np
import pytest

from rsofdmim.optical_frontend import (LinkBudget, average_intensity,
                                       budget_from_lambdas, clip_and_bias,
                                       clipping_stats, dimming_to_bias,
                                       phi_pdf, q_func)


def test_q_func_values():
    assert q_func(0.0) == 0.5
    assert abs(q_func(2.0) - 0.0227501319482) < 1e-12
    assert q_func(math.inf) == 0.0
    assert q_func(-math.inf) == 1.0
    assert abs(q_func(-2.0) + q_func(2.0) - 1.0) < 1e-15


def test_phi_pdf_values():
    assert abs(phi_pdf(0.0) - 1.0 / math.sqrt(2 * math.pi)) < 1e-15
    assert phi_pdf(math.inf) == 0.0
    assert phi_pdf(-math.inf) == 0.0


def test_budget_properties():
    b = LinkBudget(i_low=0.0, i_high=5.0, i_bias=2.0, sigma_x=0.8)
    assert b.lambda1 == 3.75
    assert b.lambda2 == -2.5
    assert b.u_upper == 3.0
    assert b.u_lower == -2.0


def test_budget_from_lambdas_roundtrip():
    b = budget_from_lambdas(1.75, -3.58, 0.9354, i_bias=2.0)
    assert abs(b.lambda1 - 1.75) < 1e-12
    assert abs(b.lambda2 + 3.58) < 1e-12
    assert abs(b.u_upper - 1.75 * 0.9354) < 1e-12


def test_clip_and_bias_limits():
    b = LinkBudget(0.0, 5.0, 2.5, 1.0)
    x = np.linspace(-6, 6, 1001)
    out = clip_and_bias(x, b)
    assert out.min() >= 0.0 and out.max() <= 5.0
    inner = np.abs(x) < 2.4
    assert np.array_equal(out[inner], x[inner] + 2.5)


def test_unclipped_statistics_are_trivial():
    st = clipping_stats(math.inf, -math.inf, 0.9)
    assert st.beta == 1.0
    assert st.sigma_z2 == 0.0
    assert st.mean_xc == 0.0
    assert st.p_lower == 0.0 and st.p_upper == 0.0
    assert abs(st.sigma_xc2 - 0.81) < 1e-12


def test_symmetric_clipping_closed_values():
    st = clipping_stats(2.0, -2.0, 1.0)
    assert abs(st.beta - 0.9544997361036416) < 1e-12
    assert abs(st.mean_xc) < 1e-15
    assert abs(st.p_lower - q_func(2.0)) < 1e-15
    assert abs(st.p_upper - q_func(2.0)) < 1e-15
    assert st.sigma_z2 > 0


def test_bounds_order_validated():
    with pytest.raises(ValueError):
        clipping_stats(-1.0, 1.0, 1.0)


@pytest.mark.parametrize("l1,l2", [(2.0, -2.0), (math.inf, -1.8),
                                   (1.75, -3.58)])
def test_statistics_match_monte_carlo(l1, l2):
    sigma = 1.3
    st = clipping_stats(l1, l2, sigma)
    rng = np.random.default_rng(21)
    x = rng.normal(0.0, sigma, size=1_000_000)
    xc = np.clip(x, l2 * sigma, l1 * sigma if math.isfinite(l1) else None)
    beta_mc = np.mean(xc * x) / np.mean(x * x)
    assert abs(st.beta - beta_mc) / beta_mc < 0.02
    assert abs(st.sigma_xc2 - np.var(xc)) / np.var(xc) < 0.02
    assert abs(st.mean_xc - np.mean(xc)) < 0.01 * sigma
    z_var = np.var(xc - beta_mc * x)
    assert abs(st.sigma_z2 - z_var) / z_var < 0.03


def test_average_intensity_matches_monte_carlo():
    b = LinkBudget(0.0, 5.0, 2.0, 0.9354)
    rng = np.random.default_rng(22)
    x = rng.normal(0.0, b.sigma_x, size=1_000_000)
    mc = np.mean(clip_and_bias(x, b))
    assert abs(average_intensity(b) - mc) < 0.005


def test_dimming_bias_symmetric_midpoint():
    b = dimming_to_bias(0.5, (0.0, 5.0), 0.9013878)
    assert abs(b.i_bias - 2.5) < 1e-9
    assert abs(b.lambda1 - 2.5 / 0.9013878) < 1e-6
    assert abs(b.lambda1 + b.lambda2) < 1e-8


def test_dimming_bias_hits_requested_mean():
    for eta in np.arange(0.1, 0.95, 0.1):
        b = dimming_to_bias(float(eta), (0.0, 5.0), 0.9842509)
        assert abs(average_intensity(b) - 5.0 * eta) < 1e-8
        assert abs((b.lambda1 - b.lambda2) * b.sigma_x - 5.0) < 1e-12


def test_dimming_bias_monotone_in_eta():
    biases = [dimming_to_bias(eta, (0.0, 5.0), 0.9).i_bias
              for eta in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert all(a < b for a, b in zip(biases, biases[1:]))


def test_unreachable_dimming_raises():
    with pytest.raises(ArithmeticError):
        dimming_to_bias(0.999, (0.0, 5.0), 2.0)
    with pytest.raises(ArithmeticError):
        dimming_to_bias(0.001, (0.0, 5.0), 2.0)


def test_dimming_argument_validation():
    with pytest.raises(ValueError):
        dimming_to_bias(0.0, (0.0, 5.0), 1.0)
    with pytest.raises(ValueError):
        dimming_to_bias(1.0, (0.0, 5.0), 1.0)
    with pytest.raises(ValueError):
        dimming_to_bias(0.5, (0.0, 5.0), 0.0)
