"""LED front end: clipping to the dynamic range, DC bias, Bussgang statistics,
and dimming control via bias selection.

Normalized clipping bounds follow lambda1 = (I_H - I_bias)/sigma_x and
lambda2 = (I_L - I_bias)/sigma_x; the clipped Gaussian is modeled as
x_c = beta*x + z with beta = Q(lambda2) - Q(lambda1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special


def q_func(a: float) -> float:
    """Gaussian tail probability Q(a)."""
    if math.isinf(a):
        return 0.0 if a > 0 else 1.0
    return 0.5 * special.erfc(a / math.sqrt(2.0))


def phi_pdf(a: float) -> float:
    if math.isinf(a):
        return 0.0
    return math.exp(-0.5 * a * a) / math.sqrt(2.0 * math.pi)


def _a_times(a: float, v: float) -> float:
    """a*v with the a -> +-inf limits (v decays faster than 1/a)."""
    if math.isinf(a):
        return 0.0
    return a * v


@dataclass(frozen=True)
class LinkBudget:
    i_low: float
    i_high: float
    i_bias: float
    sigma_x: float

    @property
    def lambda1(self) -> float:
        return (self.i_high - self.i_bias) / self.sigma_x

    @property
    def lambda2(self) -> float:
        return (self.i_low - self.i_bias) / self.sigma_x

    @property
    def u_upper(self) -> float:
        return self.i_high - self.i_bias

    @property
    def u_lower(self) -> float:
        return self.i_low - self.i_bias


@dataclass(frozen=True)
class ClippingStats:
    beta: float
    sigma_xc2: float
    mean_xc: float
    sigma_z2: float
    p_lower: float
    p_upper: float


def budget_from_lambdas(lambda1: float, lambda2: float, sigma_x: float,
                        i_bias: float = 0.0) -> LinkBudget:
    """Budget with clipping bounds expressed in units of sigma_x."""
    return LinkBudget(
        i_low=i_bias + lambda2 * sigma_x,
        i_high=i_bias + lambda1 * sigma_x,
        i_bias=i_bias,
        sigma_x=sigma_x,
    )


def clip_and_bias(x: np.ndarray, b: LinkBudget) -> np.ndarray:
    """Clip to [u_lower, u_upper], then add the DC bias: output in [I_L, I_H]."""
    return np.clip(x, b.u_lower, b.u_upper) + b.i_bias


def clipping_stats(lambda1: float, lambda2: float, sigma_x: float) -> ClippingStats:
    """Closed-form moments of the clipped zero-mean Gaussian (std sigma_x)."""
    if lambda2 > lambda1:
        raise ValueError("need lambda2 <= lambda1")
    q1, q2 = q_func(lambda1), q_func(lambda2)
    f1, f2 = phi_pdf(lambda1), phi_pdf(lambda2)
    beta = q2 - q1
    mean = sigma_x * (f2 - f1 + _a_times(lambda2, 1.0 - q2) + _a_times(lambda1, q1))
    ex2 = (q2 - q1
           + _a_times(lambda2, f2) - _a_times(lambda1, f1)
           + _a_times(lambda2, _a_times(lambda2, 1.0 - q2))
           + _a_times(lambda1, _a_times(lambda1, q1)))
    sigma_xc2 = sigma_x ** 2 * ex2 - mean ** 2
    sigma_z2 = sigma_xc2 - beta ** 2 * sigma_x ** 2
    return ClippingStats(
        beta=beta,
        sigma_xc2=sigma_xc2,
        mean_xc=mean,
        sigma_z2=max(sigma_z2, 0.0),
        p_lower=1.0 - q2,
        p_upper=q1,
    )


def average_intensity(b: LinkBudget) -> float:
    """Mean LED drive level I_m for the clipped, biased signal."""
    l1, l2 = b.lambda1, b.lambda2
    return b.sigma_x * (_a_times(l1, q_func(l1)) + _a_times(l2, q_func(-l2))
                        + phi_pdf(l2) - phi_pdf(l1)) + b.i_bias


def dimming_to_bias(eta: float, dynamic_range, sigma_x: float,
                    tol: float = 1e-9) -> LinkBudget:
    """Find the bias whose average intensity hits I_L + eta*(I_H - I_L).

    average_intensity is strictly increasing in the bias, so a bracketed root
    on [I_L, I_H] always exists for 0 < eta < 1.
    """
    i_low, i_high = float(dynamic_range[0]), float(dynamic_range[1])
    if not 0.0 < eta < 1.0:
        raise ValueError("dimming level must be strictly inside (0, 1)")
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive")
    target = i_low + eta * (i_high - i_low)

    def gap(i_bias):
        return average_intensity(LinkBudget(i_low, i_high, i_bias, sigma_x)) - target

    lo, hi = gap(i_low), gap(i_high)
    if lo > 0 or hi < 0:
        raise ArithmeticError("no bias in [I_L, I_H] reaches the requested dimming")
    root = optimize.brentq(gap, i_low, i_high, xtol=tol, rtol=8.9e-16)
    return LinkBudget(i_low, i_high, float(root), sigma_x)
