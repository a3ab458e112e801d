"""OFDM frame assembly with Hermitian symmetry, unitary IFFT/FFT, CP handling.

Frame layout (frequency domain, N_T bins): bin 0 (DC) and bin N_T/2 are zero,
data bins run contiguously from bin 1 through G*N, remaining bins below
Nyquist are guards, and the upper half mirrors the lower conjugated so the
time signal is real.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np


@dataclass(frozen=True)
class FramePlan:
    N_T: int
    G: int
    N: int  # subcarriers per sub-block
    cp_len: int = 0
    N_f: int = dc_field(init=False)
    used: int = dc_field(init=False)
    guard: int = dc_field(init=False)

    def __post_init__(self):
        if self.N_T % 2 != 0:
            raise ValueError("N_T must be even for Hermitian symmetry")
        if self.N_T < 4:
            raise ValueError("N_T too small")
        object.__setattr__(self, "N_f", self.N_T // 2)
        if self.G * self.N > self.N_f - 1:
            raise ValueError("G*N data bins exceed N_T/2 - 1")
        object.__setattr__(self, "used", 2 * self.G * self.N)
        object.__setattr__(self, "guard", self.N_f - 1 - self.G * self.N)
        if self.cp_len < 0 or self.cp_len >= self.N_T:
            raise ValueError("bad cyclic prefix length")


def assemble_frame(subblocks: np.ndarray, plan: FramePlan) -> np.ndarray:
    """Stack G sub-blocks of N symbols into an N_T-bin Hermitian-symmetric frame."""
    sb = np.asarray(subblocks, dtype=complex)
    if sb.shape != (plan.G, plan.N):
        raise ValueError("expected (G, N) sub-block array")
    freq = np.zeros(plan.N_T, dtype=complex)
    data = sb.reshape(-1)
    freq[1 : 1 + data.size] = data
    freq[plan.N_f + 1 :] = np.conj(freq[1 : plan.N_f][::-1])
    return freq


def extract_subblocks(freq: np.ndarray, plan: FramePlan) -> np.ndarray:
    """Inverse of assemble_frame: pull the (G, N) data bins from a frame."""
    data = np.asarray(freq)[1 : 1 + plan.G * plan.N]
    return data.reshape(plan.G, plan.N)


def ofdm_modulate(freq: np.ndarray, plan: FramePlan) -> np.ndarray:
    """Unitary IFFT, x_n = (1/sqrt(N_T)) sum X_k e^(2pi j nk/N_T); returns real samples."""
    freq = np.asarray(freq, dtype=complex)
    if freq.shape != (plan.N_T,):
        raise ValueError("expected N_T frequency bins")
    x = np.fft.ifft(freq) * np.sqrt(plan.N_T)
    imax = np.max(np.abs(x.imag)) if plan.N_T else 0.0
    if imax > 1e-10:
        raise ValueError("frame violates Hermitian symmetry (imag %.2e)" % imax)
    return x.real


def ofdm_demodulate(time: np.ndarray, plan: FramePlan) -> np.ndarray:
    """Unitary FFT companion of ofdm_modulate."""
    time = np.asarray(time)
    if time.shape != (plan.N_T,):
        raise ValueError("expected N_T time samples")
    return np.fft.fft(time) / np.sqrt(plan.N_T)


def add_cp(time: np.ndarray, plan: FramePlan) -> np.ndarray:
    if plan.cp_len == 0:
        return time
    return np.concatenate([time[-plan.cp_len :], time])


def remove_cp(time: np.ndarray, plan: FramePlan) -> np.ndarray:
    if plan.cp_len == 0:
        return time
    return time[plan.cp_len : plan.cp_len + plan.N_T]


def signal_std(plan: FramePlan, S: int, Es: float = 1.0) -> float:
    """Time-domain std after nulling S subcarriers per sub-block (both HS halves)."""
    if not 0 <= S <= plan.N:
        raise ValueError("need 0 <= S <= N")
    used_active = plan.used - 2 * plan.G * S
    return float(np.sqrt(used_active / plan.N_T * Es))
