"""Constellation energy, labeling, and hard-decision demapping."""

import math

import numpy as np
import pytest

from rsofdmim.optical_frontend import q_func
from rsofdmim.qam_modem import make_constellation, qam_demap_hard, qam_map


@pytest.mark.parametrize("m", [4, 16, 32, 64])
def test_unit_average_energy(m):
    c = make_constellation(m)
    assert c.M == m
    assert c.points.shape == (m,)
    assert abs(np.mean(np.abs(c.points) ** 2) - 1.0) < 1e-12


@pytest.mark.parametrize("m", [4, 16, 32, 64])
def test_labels_map_to_distinct_points(m):
    c = make_constellation(m)
    assert len({complex(v) for v in c.points}) == m


def test_unsupported_order_rejected():
    with pytest.raises(ValueError):
        make_constellation(8)
    with pytest.raises(ValueError):
        make_constellation(128)


def test_cross_32_geometry():
    c = make_constellation(32)
    scaled = c.points * math.sqrt(20.0)  # undo unit-energy normalization
    grid = np.round(scaled.real) + 1j * np.round(scaled.imag)
    assert np.max(np.abs(scaled - grid)) < 1e-9
    levels = {(int(v.real), int(v.imag)) for v in grid}
    assert len(levels) == 32
    odd = {1, 3, 5}
    assert all(abs(i) in odd and abs(q) in odd for i, q in levels)
    assert all(not (abs(i) == 5 and abs(q) == 5) for i, q in levels)
    assert max(abs(v) for v in grid) == abs(5 + 3j)
    assert abs(min(np.abs(c.points)) - math.sqrt(0.1)) < 1e-12


def test_square_gray_neighbors_differ_in_one_bit():
    for m in (16, 64):
        c = make_constellation(m)
        side = int(round(m ** 0.5))
        step = 2.0 / math.sqrt(2.0 * (m - 1) / 3.0)
        for a in range(m):
            for b in range(a + 1, m):
                if abs(abs(c.points[a] - c.points[b]) - step) < 1e-9:
                    assert bin(a ^ b).count("1") == 1


def test_map_demap_roundtrip():
    for m in (4, 16, 32, 64):
        c = make_constellation(m)
        labels = np.arange(m)
        assert np.array_equal(qam_demap_hard(qam_map(labels, c), c), labels)


def test_map_rejects_bad_labels():
    c = make_constellation(16)
    with pytest.raises(ValueError):
        qam_map(16, c)
    with pytest.raises(ValueError):
        qam_map(np.array([3, -1]), c)


def test_demap_tie_breaks_to_lowest_label():
    c = make_constellation(4)
    assert qam_demap_hard(np.array(0j), c) == 0
    mid = (c.points[0] + c.points[1]) / 2
    assert qam_demap_hard(np.array(mid), c) == 0


def test_demap_alphabet_restriction():
    c = make_constellation(64)
    y = c.points[40]
    assert qam_demap_hard(np.array(y), c) == 40
    restricted = int(qam_demap_hard(np.array(y), c, alphabet_size=32))
    assert restricted < 32
    sub = np.arange(32)
    assert np.array_equal(
        qam_demap_hard(c.points[sub], c, alphabet_size=32), sub)


def test_demap_preserves_shape():
    c = make_constellation(32)
    y = qam_map(np.arange(32).reshape(4, 8), c)
    assert qam_demap_hard(y, c).shape == (4, 8)


def test_qpsk_symbol_error_rate_matches_closed_form():
    c = make_constellation(4)
    rng = np.random.default_rng(17)
    n = 200_000
    labels = rng.integers(0, 4, size=n)
    sigma_c = 0.5  # total complex noise variance sigma_c^2 = 0.25
    noise = rng.normal(0.0, sigma_c / math.sqrt(2.0), size=(n, 2))
    y = qam_map(labels, c) + noise[:, 0] + 1j * noise[:, 1]
    ser = np.mean(qam_demap_hard(y, c) != labels)
    p_axis = q_func(1.0 / sigma_c)
    expected = 1.0 - (1.0 - p_axis) ** 2
    assert abs(ser - expected) / expected < 0.05
