"""Fast internal consistency checks used by the selftest subcommand."""

from __future__ import annotations

import numpy as np

from .galois import build_field
from .harness import SimConfig, run_sweep
from .ofdm_phy import FramePlan, assemble_frame, extract_subblocks, \
    ofdm_demodulate, ofdm_modulate
from .optical_frontend import clipping_stats
from .qam_modem import make_constellation
from .rs_code import CodeParams, puncture, rs_decode, rs_encode
from .sim_map import bits_to_puncture, index_bits_capacity, puncture_to_bits


def _check_field():
    f = build_field(3)
    vals = range(f.order)
    for a in vals:
        for b in vals:
            assert f.mul(a, b) == f.mul(b, a)
            if b:
                assert f.mul(f.div(a, b), b) == a
    assert all(f.mul(a, 1) == a for a in vals)


def _check_codec():
    f = build_field(4)
    p = CodeParams(f, 15, 9, S=2)
    rng = np.random.default_rng(11)
    for _ in range(50):
        msg = rng.integers(0, 16, size=9)
        cw = rs_encode(msg, p)
        assert len(puncture(cw, (3, 9))) == 13
        word = cw.copy()
        err_pos = rng.choice([i for i in range(15) if i not in (2, 8)], size=2,
                             replace=False)
        for e in err_pos:
            word[e] ^= int(rng.integers(1, 16))
        out = rs_decode(word, (3, 9), p)
        assert np.array_equal(out, msg)


def _check_sim_map():
    n, s = 15, 4
    p1 = index_bits_capacity(n, s)
    for v in range(2 ** p1):
        vec = bits_to_puncture(v, n, s)
        assert puncture_to_bits(vec.positions, n, s) == v


def _check_ofdm():
    plan = FramePlan(64, 2, 7)
    rng = np.random.default_rng(5)
    blocks = rng.normal(size=(2, 7)) + 1j * rng.normal(size=(2, 7))
    frame = assemble_frame(blocks, plan)
    x = ofdm_modulate(frame, plan)
    back = extract_subblocks(ofdm_demodulate(x, plan), plan)
    assert np.max(np.abs(back - blocks)) < 1e-9


def _check_clipping():
    st = clipping_stats(2.0, -2.0, 1.0)
    rng = np.random.default_rng(3)
    x = rng.normal(size=1_000_000)
    xc = np.clip(x, -2.0, 2.0)
    beta_mc = np.mean(xc * x) / np.mean(x * x)
    assert abs(st.beta - beta_mc) / beta_mc < 0.02
    assert abs(st.sigma_xc2 - np.var(xc)) / np.var(xc) < 0.02


def _check_pipeline():
    cfg = SimConfig(scheme="rs_ofdm_im", k=19, s=2, snr_db=(float("inf"),),
                    max_bits=100_000, min_errors=1, seed=2)
    rec = run_sweep(cfg)[0]
    assert rec.bit_errors == 0
    assert rec.bits_sent >= 100_000
    make_constellation(32)


CHECKS = [
    ("field arithmetic", _check_field),
    ("errors-and-erasures codec", _check_codec),
    ("index rank/unrank", _check_sim_map),
    ("frame round trip", _check_ofdm),
    ("clipping statistics", _check_clipping),
    ("noiseless pipeline", _check_pipeline),
]


def run() -> int:
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # report and flag, keep going
            print("FAIL %s: %s" % (name, exc))
            return 3
        print("ok %s" % name)
    return 0
