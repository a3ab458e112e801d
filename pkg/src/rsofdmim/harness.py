"""Monte Carlo experiment engine: scheme pipelines, config parsing, sweeps,
and CSV emission.

Schemes:
  rs_ofdm_im    codeword symbols punctured by the index selector; punctured
                positions are known erasures at the decoder.
  coded_dco     RS-coded DCO-OFDM; identical pipeline with S = 0.
  coded_ofdm_im classical index modulation: sub-blocks of n_prime bins with
                n active, the codeword compacted onto the active bins in
                order, no erasure knowledge.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .analysis import BoundInputs, throughput, total_ber_bound
from .channel import noise_variance, transmit
from .detector import ReceiverChain, receive_frame
from .galois import build_field
from .ofdm_phy import FramePlan, signal_std
from .optical_frontend import (ClippingStats, LinkBudget, budget_from_lambdas,
                               clip_and_bias, clipping_stats, dimming_to_bias)
from .qam_modem import make_constellation, qam_demap_hard
from .rs_code import CodeParams, DecodeFailure, rs_decode, rs_encode_batch, \
    syndromes_batch
from .sim_map import bits_to_puncture, index_bits_capacity, puncture_to_bits

SCHEMES = ("rs_ofdm_im", "coded_dco", "coded_ofdm_im")
CLIP_MODES = ("off", "double", "single", "dimming")
TARGET_BITS_PER_BATCH = 50_000


class ConfigError(Exception):
    """Invalid or contradictory simulation configuration."""


@dataclass(frozen=True)
class SimConfig:
    scheme: str = "rs_ofdm_im"
    n_t: int = 1024
    g: int = 16
    n: int = 31
    field_m: int = 5
    qam_m: int = 32
    k: int = 19
    s: int = 0
    n_prime: int = 34
    guard: int = -1            # -1: derived from the frame plan
    cp_len: int = 0
    clip_mode: str = "off"
    lambda1: float = 2.0
    lambda2: float = -2.0
    eta: float = 0.5
    i_low: float = 0.0
    i_high: float = 5.0
    snr_db: tuple = (30.0,)
    snr_ref: str = "snr_l"
    detector_mode: str = "with_sigma_z"
    min_errors: int = 200
    max_bits: int = 100_000_000
    seed: int = 1
    workers: int = 1


_PARSERS = {
    "scheme": str, "n_t": int, "g": int, "n": int, "field_m": int,
    "qam_m": int, "k": int, "s": int, "n_prime": int, "guard": int,
    "cp_len": int, "clip_mode": str, "lambda1": float, "lambda2": float,
    "eta": float, "i_low": float, "i_high": float,
    "snr_db": lambda v: tuple(float(x) for x in v.split(",") if x.strip()),
    "snr_ref": str, "detector_mode": str, "min_errors": int,
    "max_bits": lambda v: int(float(v)), "seed": int, "workers": int,
}

# execution details that must not affect the emitted CSV
_NO_ECHO = ("workers",)


def parse_config(text: str) -> SimConfig:
    """Flat key = value config text to SimConfig; unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected key = value" % lineno)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _PARSERS:
            raise ConfigError("line %d: unknown key '%s'" % (lineno, key))
        if key in values:
            raise ConfigError("line %d: duplicate key '%s'" % (lineno, key))
        try:
            values[key] = _PARSERS[key](val)
        except ValueError as exc:
            raise ConfigError("line %d: bad value for '%s': %s"
                              % (lineno, key, exc)) from None
    return SimConfig(**values)


def load_config(path: str) -> SimConfig:
    with open(path) as fh:
        return parse_config(fh.read())


class Engine:
    """Per-configuration transmit/receive pipeline shared by all sweeps."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self._validate(cfg)
        try:
            self.field = build_field(cfg.field_m)
            self.constellation = make_constellation(cfg.qam_m)
            if cfg.scheme == "coded_ofdm_im":
                self.code = CodeParams(self.field, cfg.n, cfg.k, 0)
                self.block_len = cfg.n_prime
                self.s_nulls = cfg.n_prime - cfg.n
            else:
                self.code = CodeParams(self.field, cfg.n, cfg.k, cfg.s)
                self.block_len = cfg.n
                self.s_nulls = cfg.s
            self.p1 = index_bits_capacity(self.block_len, self.s_nulls)
            self.p2 = cfg.k * cfg.field_m
            self.bits_per_frame = cfg.g * (self.p1 + self.p2)
            self.plan = FramePlan(cfg.n_t, cfg.g, self.block_len, cfg.cp_len)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if cfg.guard >= 0 and cfg.guard != self.plan.guard:
            raise ConfigError("guard %d contradicts the frame plan (derived %d)"
                              % (cfg.guard, self.plan.guard))
        self.sigma_ref = signal_std(self.plan, 0)
        self.sigma_sig = signal_std(self.plan, self.s_nulls)
        self.budget, self.stats = self._clipping(cfg)
        self._popcount = np.array([bin(i).count("1")
                                   for i in range(self.field.order)])
        # puncturing-vector lookup; unranked on the fly when too large
        self._codebook = None
        if 0 < self.s_nulls and self.p1 <= 20:
            self._codebook = np.array(
                [bits_to_puncture(v, self.block_len, self.s_nulls).positions
                 for v in range(2 ** self.p1)], dtype=np.int64)

    @staticmethod
    def _validate(cfg: SimConfig):
        if cfg.scheme not in SCHEMES:
            raise ConfigError("unknown scheme '%s'" % cfg.scheme)
        if cfg.clip_mode not in CLIP_MODES:
            raise ConfigError("unknown clip_mode '%s'" % cfg.clip_mode)
        if cfg.snr_ref not in ("snr_l", "snr_t"):
            raise ConfigError("snr_ref must be snr_l or snr_t")
        if cfg.detector_mode not in ("with_sigma_z", "printed"):
            raise ConfigError("detector_mode must be with_sigma_z or printed")
        if not 2 <= cfg.field_m <= 12:
            raise ConfigError("field_m out of range")
        if cfg.n != 2 ** cfg.field_m - 1:
            raise ConfigError("n must equal 2^field_m - 1")
        if cfg.qam_m < 2 ** cfg.field_m:
            raise ConfigError("qam_m must cover the field alphabet")
        if not 1 <= cfg.k < cfg.n:
            raise ConfigError("k out of range")
        if cfg.scheme == "coded_dco" and cfg.s != 0:
            raise ConfigError("coded_dco requires s = 0")
        if cfg.scheme == "coded_ofdm_im":
            if cfg.n_prime <= cfg.n:
                raise ConfigError("n_prime must exceed n")
            if cfg.s != 0:
                raise ConfigError("coded_ofdm_im carries full codewords; s = 0")
        elif not 0 <= cfg.s <= cfg.n - cfg.k:
            raise ConfigError("need 0 <= s <= n - k")
        if not cfg.snr_db:
            raise ConfigError("empty snr_db list")
        if cfg.clip_mode == "dimming":
            if not 0 < cfg.eta < 1:
                raise ConfigError("eta must be inside (0, 1)")
            if cfg.i_low >= cfg.i_high:
                raise ConfigError("need i_low < i_high")
        if cfg.clip_mode in ("double", "single") and cfg.lambda2 > cfg.lambda1:
            raise ConfigError("need lambda2 <= lambda1")
        if cfg.min_errors <= 0 or cfg.max_bits <= 0:
            raise ConfigError("stop rule must be positive")
        if cfg.workers < 1:
            raise ConfigError("workers must be >= 1")

    def _clipping(self, cfg) -> tuple[LinkBudget | None, ClippingStats]:
        if cfg.clip_mode == "off":
            return None, ClippingStats(beta=1.0, sigma_xc2=self.sigma_sig ** 2,
                                       mean_xc=0.0, sigma_z2=0.0,
                                       p_lower=0.0, p_upper=0.0)
        if cfg.clip_mode == "double":
            l1, l2 = cfg.lambda1, cfg.lambda2
        elif cfg.clip_mode == "single":
            l1, l2 = math.inf, cfg.lambda2
        else:
            budget = dimming_to_bias(cfg.eta, (cfg.i_low, cfg.i_high),
                                     self.sigma_sig)
            stats = clipping_stats(budget.lambda1, budget.lambda2,
                                   self.sigma_sig)
            return budget, stats
        # physical bounds pinned to the no-puncturing signal std, so the
        # effective normalized bounds widen as more subcarriers are nulled
        budget = budget_from_lambdas(l1 * self.sigma_ref / self.sigma_sig,
                                     l2 * self.sigma_ref / self.sigma_sig,
                                     self.sigma_sig)
        stats = clipping_stats(budget.lambda1, budget.lambda2, self.sigma_sig)
        return budget, stats

    def sigma_w2_for(self, snr_db: float) -> float:
        i_bias = self.budget.i_bias if self.budget is not None else 0.0
        return noise_variance(snr_db, self.cfg.snr_ref, self.sigma_ref ** 2,
                              i_bias)

    def chain_for(self, sigma_w2: float) -> ReceiverChain:
        return ReceiverChain(self.code, self.constellation, sigma_w2,
                             self.stats.sigma_z2, self.stats.beta,
                             self.cfg.detector_mode)

    def bound_inputs(self, sigma_w2: float) -> BoundInputs | None:
        if self.cfg.scheme == "coded_ofdm_im":
            return None
        return BoundInputs(M=self.cfg.qam_m, N=self.cfg.n, K=self.cfg.k,
                           S=self.cfg.s, G=self.cfg.g, N_T=self.cfg.n_t,
                           beta=self.stats.beta, sigma_x2=1.0,
                           sigma_z2=self.stats.sigma_z2, sigma_w2=sigma_w2,
                           a_dc=1.0, h_k=1.0,
                           constellation=self.constellation)

    def se(self) -> float:
        return self.cfg.g * (self.cfg.k * self.cfg.field_m + self.p1) \
            / self.cfg.n_t

    # --- frame pipeline ---

    def _modulate_frames(self, blocks: np.ndarray) -> np.ndarray:
        """(F, G*block_len) frequency symbols to (F, N_T) real samples."""
        f_count = blocks.shape[0]
        plan = self.plan
        freq = np.zeros((f_count, plan.N_T), dtype=complex)
        freq[:, 1:1 + plan.used // 2] = blocks
        freq[:, plan.N_f + 1:] = np.conj(freq[:, 1:plan.N_f][:, ::-1])
        return np.fft.ifft(freq, axis=1).real * math.sqrt(plan.N_T)

    def _demodulate_frames(self, samples: np.ndarray) -> np.ndarray:
        plan = self.plan
        freq = np.fft.fft(samples, axis=1) / math.sqrt(plan.N_T)
        return freq[:, 1:1 + plan.used // 2]

    def simulate_batch(self, n_frames: int, sigma_w2: float,
                       rng: np.random.Generator) -> tuple:
        cfg = self.cfg
        g, k, s = cfg.g, cfg.k, self.s_nulls
        n_blk, n_code = self.block_len, cfg.n
        blocks = n_frames * g

        msgs = rng.integers(0, self.field.order, size=(blocks, k),
                            dtype=np.int64)
        if self.p1 > 0:
            idx_vals = rng.integers(0, 2 ** self.p1, size=blocks,
                                    dtype=np.int64)
            if self._codebook is not None:
                thetas = self._codebook[idx_vals]
            else:
                thetas = np.array(
                    [bits_to_puncture(int(v), n_blk, s).positions
                     for v in idx_vals], dtype=np.int64)
        else:
            idx_vals = np.zeros(blocks, dtype=np.int64)
            thetas = np.zeros((blocks, 0), dtype=np.int64)

        cws = rs_encode_batch(msgs, self.code)
        pts = self.constellation.points[cws]
        if cfg.scheme == "coded_ofdm_im":
            null_mask = np.zeros((blocks, n_blk), dtype=bool)
            if s > 0:
                np.put_along_axis(null_mask, thetas - 1, True, axis=1)
            tx = np.zeros((blocks, n_blk), dtype=complex)
            tx[~null_mask] = pts.ravel()
        else:
            tx = pts
            if s > 0:
                rows = np.repeat(np.arange(blocks), s)
                tx[rows, (thetas - 1).ravel()] = 0.0

        x = self._modulate_frames(tx.reshape(n_frames, g * n_blk))
        if self.budget is not None:
            x = clip_and_bias(x, self.budget)
        y = transmit(x, None, sigma_w2, rng)
        rx = self._demodulate_frames(y).reshape(blocks, n_blk)

        chain = self.chain_for(sigma_w2)
        if cfg.scheme == "coded_ofdm_im":
            decided = self._receive_ofdm_im(rx, chain, thetas, cws)
        else:
            truth = [(tuple(int(t) for t in thetas[b]), cws[b])
                     for b in range(blocks)]
            decided = receive_frame(rx, chain, truth=truth)
            decided = self._collect(decided, msgs, idx_vals)
        return self._count(decided, msgs, idx_vals, n_frames)

    def _collect(self, decisions, msgs, idx_vals):
        out_msgs = np.stack([d.message for d in decisions])
        out_idx = np.array([d.index_value for d in decisions], dtype=np.int64)
        sym_in = sum(d.symbol_errors_in for d in decisions)
        pi_sum = sum(d.pi_g for d in decisions)
        failures = sum(d.decode_failed for d in decisions)
        return out_msgs, out_idx, sym_in, pi_sum, failures

    def _receive_ofdm_im(self, rx, chain, thetas, cws):
        """Classical index modulation: compacted symbols, no erasures."""
        blocks = rx.shape[0]
        n_blk, s, k = self.block_len, self.s_nulls, self.cfg.k
        y = rx / chain.beta
        sigma_eff2 = chain.sigma_eff2
        d2 = np.abs(y[:, :, None] - self.constellation.points) ** 2
        lse = logsumexp(-d2 / sigma_eff2, axis=-1)
        alpha = (math.log(s) - math.log(n_blk - s)
                 + np.abs(y) ** 2 / sigma_eff2 + lse)
        order = np.argsort(alpha, axis=1, kind="stable")[:, :s]
        null_mask = np.zeros((blocks, n_blk), dtype=bool)
        np.put_along_axis(null_mask, order, True, axis=1)

        symbols = qam_demap_hard(y, self.constellation,
                                 alphabet_size=self.field.order)
        words = symbols[~null_mask].reshape(blocks, self.cfg.n)
        synd = syndromes_batch(words, self.code)
        out_msgs = np.empty((blocks, k), dtype=np.int64)
        out_idx = np.empty(blocks, dtype=np.int64)
        sym_in = 0
        pi_sum = 0
        failures = 0
        for b in range(blocks):
            theta_hat = tuple(int(i) + 1 for i in np.flatnonzero(null_mask[b]))
            out_idx[b] = puncture_to_bits(theta_hat, n_blk, s)
            sym_in += int(np.count_nonzero(words[b] != cws[b]))
            pi_sum += len(set(int(t) for t in thetas[b]) ^ set(theta_hat)) // 2
            try:
                out_msgs[b] = rs_decode(words[b], (), self.code,
                                        syndromes=synd[b])
            except DecodeFailure:
                out_msgs[b] = words[b, :k]
                failures += 1
        return out_msgs, out_idx, sym_in, pi_sum, failures

    def _count(self, decided, msgs, idx_vals, n_frames) -> tuple:
        out_msgs, out_idx, sym_in, pi_sum, failures = decided
        blocks = msgs.shape[0]
        msg_bit_err = int(self._popcount[msgs ^ out_msgs].sum())
        idx_bit_err = sum(int(a ^ b).bit_count()
                          for a, b in zip(idx_vals.tolist(), out_idx.tolist()))
        idx_wrong = int(np.count_nonzero(idx_vals != out_idx))
        bits = n_frames * self.bits_per_frame
        return (n_frames, blocks, bits, idx_bit_err + msg_bit_err,
                idx_bit_err, msg_bit_err, sym_in, idx_wrong, pi_sum, failures)


@functools.lru_cache(maxsize=32)
def _engine_for(cfg: SimConfig) -> Engine:
    return Engine(cfg)


def _run_batch(cfg: SimConfig, point_idx: int, batch_idx: int,
               n_frames: int, sigma_w2: float) -> tuple:
    eng = _engine_for(cfg)
    seq = np.random.SeedSequence(cfg.seed, spawn_key=(point_idx, batch_idx))
    return eng.simulate_batch(n_frames, sigma_w2, np.random.default_rng(seq))


@dataclass
class SweepRecord:
    scheme: str
    snr_db: float
    eta: float | None
    k: int
    s: int
    qam_m: int
    bits_sent: int
    bit_errors: int
    ber: float
    ber_bound: float | None
    ser_pre_decoder: float
    index_error_rate: float
    pi_g_mean: float
    throughput: float
    se: float
    seed: int
    detector_mode: str


CSV_COLUMNS = ("scheme", "snr_db", "eta", "K", "S", "M", "bits_sent",
               "bit_errors", "ber", "ber_bound", "ser_pre_decoder",
               "index_error_rate", "pi_g_mean", "throughput", "se", "seed",
               "detector_mode")


def _simulate_point(cfg: SimConfig, point_idx: int, snr_db: float,
                    pool) -> SweepRecord:
    eng = _engine_for(cfg)
    sigma_w2 = eng.sigma_w2_for(snr_db)
    frames_per_batch = max(1, TARGET_BITS_PER_BATCH // eng.bits_per_frame)
    totals = [0] * 10
    batch_idx = 0
    done = False
    while not done:
        wave = list(range(batch_idx, batch_idx + max(1, cfg.workers)))
        batch_idx = wave[-1] + 1
        args = [(cfg, point_idx, b, frames_per_batch, sigma_w2) for b in wave]
        if pool is None:
            results = (_run_batch(*a) for a in args)
        else:
            results = pool.map(_run_batch_star, args)
        for res in results:
            totals = [t + r for t, r in zip(totals, res)]
            if totals[3] >= cfg.min_errors or totals[2] >= cfg.max_bits:
                done = True
                break

    (_, blocks, bits, errors, _, _, sym_in, idx_wrong, pi_sum, _) = totals
    eng_active = eng.block_len - eng.s_nulls if cfg.scheme != "coded_ofdm_im" \
        else eng.cfg.n
    ber = errors / bits
    bi = eng.bound_inputs(sigma_w2)
    bound = total_ber_bound(bi)[0] if bi is not None else None
    eta = cfg.eta if cfg.clip_mode == "dimming" else None
    se = eng.se()
    return SweepRecord(
        scheme=cfg.scheme, snr_db=snr_db, eta=eta, k=cfg.k, s=eng.s_nulls,
        qam_m=cfg.qam_m, bits_sent=bits, bit_errors=errors, ber=ber,
        ber_bound=bound, ser_pre_decoder=sym_in / (blocks * eng_active),
        index_error_rate=idx_wrong / blocks, pi_g_mean=pi_sum / blocks,
        throughput=throughput(min(ber, 1.0), se), se=se, seed=cfg.seed,
        detector_mode=cfg.detector_mode)


def _run_batch_star(args):
    return _run_batch(*args)


def run_sweep(cfg: SimConfig) -> list[SweepRecord]:
    """One record per SNR point; deterministic for a fixed seed."""
    _engine_for(cfg)  # validate before any simulation
    pool = None
    try:
        if cfg.workers > 1:
            pool = ProcessPoolExecutor(max_workers=cfg.workers)
        return [_simulate_point(cfg, i, snr, pool)
                for i, snr in enumerate(cfg.snr_db)]
    finally:
        if pool is not None:
            pool.shutdown()


def run_dimming_sweep(cfg: SimConfig, etas, snr_t_db: float) -> list[SweepRecord]:
    """Per dimming level: solve the bias, simulate at SNR_t, record throughput."""
    records = []
    for i, eta in enumerate(etas):
        cfg_eta = dataclasses.replace(cfg, clip_mode="dimming", eta=float(eta),
                                      snr_db=(float(snr_t_db),),
                                      snr_ref="snr_t")
        _engine_for(cfg_eta)
        pool = None
        try:
            if cfg_eta.workers > 1:
                pool = ProcessPoolExecutor(max_workers=cfg_eta.workers)
            records.append(_simulate_point(cfg_eta, i, float(snr_t_db), pool))
        finally:
            if pool is not None:
                pool.shutdown()
    return records


def emit_bounds_table(entries, i_low: float = 0.0, i_high: float = 5.0,
                etas=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
                n_t: int = 1024, g: int = 16, n: int = 31) -> list[dict]:
    """Normalized clipping bounds per (K, S) entry and dimming level."""
    rows = []
    for k, s in entries:
        plan = FramePlan(n_t, g, n)
        sigma = signal_std(plan, s)
        for eta in etas:
            b = dimming_to_bias(eta, (i_low, i_high), sigma)
            rows.append({"k": k, "s": s, "eta": eta, "sigma_x": sigma,
                         "i_bias": b.i_bias, "lambda1": b.lambda1,
                         "lambda2": b.lambda2})
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.9g" % value
    return str(value)


def records_to_csv(records: list[SweepRecord], cfg: SimConfig) -> str:
    """CSV text with # metadata lines; excludes execution-only settings."""
    from . import __version__
    echo = " ".join("%s=%s" % (f.name, _fmt(getattr(cfg, f.name)))
                    for f in dataclasses.fields(cfg)
                    if f.name not in _NO_ECHO and f.name != "snr_db")
    lines = [
        "# config: %s snr_db=%s" % (echo, ",".join("%.9g" % v
                                                   for v in cfg.snr_db)),
        "# seed: %d" % cfg.seed,
        "# detector_mode: %s" % cfg.detector_mode,
        "# version: %s" % __version__,
        ",".join(CSV_COLUMNS),
    ]
    for r in records:
        lines.append(",".join(_fmt(v) for v in (
            r.scheme, r.snr_db, r.eta, r.k, r.s, r.qam_m, r.bits_sent,
            r.bit_errors, r.ber, r.ber_bound, r.ser_pre_decoder,
            r.index_error_rate, r.pi_g_mean, r.throughput, r.se, r.seed,
            r.detector_mode)))
    return "\n".join(lines) + "\n"


def analyze_sweep(cfg: SimConfig) -> list[dict]:
    """Closed-form metrics per SNR point, no simulation."""
    from .analysis import decoder_error_rates, p_correct_detection, p_ser_qam
    from .channel import sndr as sndr_fn
    eng = _engine_for(cfg)
    if eng.bound_inputs(1.0) is None:
        raise ConfigError("closed forms are defined for the punctured-code "
                          "and DCO schemes only")
    rows = []
    for snr_db in cfg.snr_db:
        sigma_w2 = eng.sigma_w2_for(snr_db)
        bi = eng.bound_inputs(sigma_w2)
        snd = sndr_fn(bi.beta, bi.sigma_x2, bi.sigma_z2, bi.sigma_w2,
                      bi.a_dc, bi.h_k)
        p_s = p_ser_qam(bi.M, snd)
        p_cd = p_correct_detection(bi.M, bi.S, bi.N, bi.sigma_w2, bi.sigma_z2,
                                   bi.constellation)
        pc, pinc, ptot = decoder_error_rates(p_s, bi.N, bi.K, bi.S, bi.p1,
                                             p_cd)
        bound, bsim = total_ber_bound(bi)
        se = eng.se()
        rows.append({"snr_db": snr_db, "sigma_w2": sigma_w2,
                     "beta": bi.beta, "sigma_z2": bi.sigma_z2, "sndr": snd,
                     "p_ser": p_s, "p_cd": p_cd, "p_out_correct": pc,
                     "p_out_incorrect": pinc, "p_out_total": ptot,
                     "p_bsim": bsim, "ber_bound": bound, "se": se,
                     "throughput_bound": throughput(min(bound, 1.0), se)})
    return rows
