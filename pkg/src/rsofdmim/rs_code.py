"""Systematic Reed-Solomon codec with errors-and-erasures decoding.

Codeword layout: symbols[0..K-1] = message, symbols[K..N-1] = parity, with
symbols[i] the coefficient of x^(N-1-i).  Generator polynomial
g(x) = prod_{i=1..d-1} (x - alpha^i) (narrow sense, first root alpha).
Decoding: Berlekamp-Massey seeded with the erasure locator, Chien search,
Forney's algorithm, final syndrome recheck.  Erasure positions are 1-based,
matching the puncturing-vector convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .galois import FieldTables


class DecodeFailure(Exception):
    """Raised when bounded-distance decoding cannot produce a consistent codeword."""


@dataclass
class CodeParams:
    field: FieldTables
    N: int
    K: int
    S: int = 0
    d: int = dc_field(init=False)
    t: int = dc_field(init=False)
    r_c: float = dc_field(init=False)
    generator: list = dc_field(init=False, repr=False)

    def __post_init__(self):
        f = self.field
        if self.N != f.n:
            raise ValueError("code length must be 2^m - 1 = %d" % f.n)
        if not 1 <= self.K < self.N:
            raise ValueError("need 1 <= K < N")
        if not 0 <= self.S <= self.N - self.K:
            raise ValueError("punctured symbols cannot exceed redundancy N - K")
        self.d = self.N - self.K + 1
        self.t = (self.N - self.K - self.S) // 2
        self.r_c = self.K / self.N
        # g(x) as highest-degree-first coefficient list, g[0] = 1
        g = [1]
        for i in range(1, self.d):
            root = f.exp_table[i]
            nxt = [0] * (len(g) + 1)
            for j, c in enumerate(g):
                nxt[j] ^= f.mul(c, 1)
                nxt[j + 1] ^= f.mul(c, root)
            g = nxt
        self.generator = g
        # log-domain copy of g[1:] for the vectorized encoder
        self._gen_tail_log = np.array(
            [f.log_table[c] if c else -1 for c in g[1:]], dtype=np.int64
        )


def rs_encode(msg, p: CodeParams) -> np.ndarray:
    """Systematic encode: append the remainder of msg(x)*x^(d-1) mod g(x)."""
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape != (p.K,):
        raise ValueError("message must hold exactly K symbols")
    return rs_encode_batch(msg[None, :], p)[0]


def rs_encode_batch(msgs: np.ndarray, p: CodeParams) -> np.ndarray:
    """Vectorized systematic encoding of a (B, K) block of messages -> (B, N)."""
    f = p.field
    msgs = np.asarray(msgs, dtype=np.int64)
    B = msgs.shape[0]
    npar = p.d - 1
    rem = np.zeros((B, npar), dtype=np.int64)
    glog = p._gen_tail_log
    gzero = glog < 0
    for i in range(p.K):
        coef = msgs[:, i] ^ rem[:, 0]
        rem[:, :-1] = rem[:, 1:]
        rem[:, -1] = 0
        q = f.exp_np[f.log_np[coef][:, None] + np.where(gzero, 0, glog)[None, :]]
        q[:, gzero] = 0
        q[coef == 0, :] = 0
        rem ^= q
    return np.concatenate([msgs, rem], axis=1)


def syndromes_batch(words: np.ndarray, p: CodeParams) -> np.ndarray:
    """Syndromes S_j = word(alpha^(j+1)), j = 0..d-2, for a (B, N) block -> (B, d-1)."""
    f = p.field
    words = np.asarray(words, dtype=np.int64)
    deg = np.arange(p.N - 1, -1, -1, dtype=np.int64)  # degree of position i
    j = np.arange(1, p.d, dtype=np.int64)
    alog = (j[:, None] * deg[None, :]) % f.n  # (d-1, N)
    terms = f.exp_np[f.log_np[words][:, None, :] + alog[None, :, :]]
    terms = np.where(words[:, None, :] == 0, 0, terms)
    return np.bitwise_xor.reduce(terms, axis=2)


def puncture(cw, theta) -> np.ndarray:
    """Drop the symbols at 1-based positions theta, preserving codeword order."""
    cw = np.asarray(cw)
    drop = set(theta)
    if drop and (min(drop) < 1 or max(drop) > len(cw)):
        raise ValueError("puncture position out of range")
    keep = [i for i in range(len(cw)) if i + 1 not in drop]
    return cw[keep]


def _poly_eval(poly, x, f: FieldTables) -> int:
    """Evaluate a lowest-degree-first coefficient list at x (Horner)."""
    acc = 0
    for c in reversed(poly):
        acc = f.mul(acc, x) ^ c
    return acc


def rs_decode(word, erasure_positions, p: CodeParams, syndromes=None) -> np.ndarray:
    """Errors-and-erasures decode; returns the K message symbols.

    Corrects any pattern with 2*errors + len(erasures) <= d - 1; raises
    DecodeFailure when no consistent codeword is found.  `syndromes` may carry
    a precomputed row from syndromes_batch (erased positions already zeroed).
    """
    f = p.field
    n = f.n
    exp2, log = f._exp2, f.log_table
    nsyn = p.d - 1
    era = sorted(int(e) for e in erasure_positions)
    if era and (era[0] < 1 or era[-1] > p.N):
        raise ValueError("erasure position out of range")
    if len(era) != len(set(era)):
        raise ValueError("duplicate erasure positions")
    if len(era) > nsyn:
        raise ValueError("more erasures than redundancy")

    w = [int(v) for v in word]
    if len(w) != p.N:
        raise ValueError("word must hold N symbols")
    for pos in era:
        w[pos - 1] = 0

    if syndromes is None:
        synd = [0] * nsyn
        for j in range(nsyn):
            acc = 0
            x = f.exp_table[j + 1]
            for c in w:
                acc = (exp2[log[acc] + log[x]] if acc else 0) ^ c
            synd[j] = acc
    else:
        synd = [int(s) for s in syndromes]

    if not any(synd):
        return np.array(w[: p.K], dtype=np.int64)

    # erasure locator Gamma(x) = prod (1 - X_i x), lowest-degree-first
    era_x_log = [(p.N - pos) % n for pos in era]  # log of X = alpha^(N-1-(pos-1))
    gamma = [1]
    for xl in era_x_log:
        nxt = [0] * (len(gamma) + 1)
        for i, c in enumerate(gamma):
            nxt[i] ^= c
            if c:
                nxt[i + 1] ^= exp2[log[c] + xl]
        gamma = nxt

    # Berlekamp-Massey over the remaining syndromes, seeded with Gamma
    lam = list(gamma)
    prev = list(gamma)
    had_discrepancy = False
    for k in range(len(era), nsyn):
        prev = [0] + prev
        delta = 0
        for i in range(min(len(lam), k + 1)):
            if lam[i] and synd[k - i]:
                delta ^= exp2[log[lam[i]] + log[synd[k - i]]]
        if delta:
            had_discrepancy = True
            dlog = log[delta]
            if len(prev) > len(lam):
                new = [exp2[log[c] + dlog] if c else 0 for c in prev]
                prev = [exp2[log[c] + n - dlog] if c else 0 for c in lam]
                lam = new
            add = [exp2[log[c] + dlog] if c else 0 for c in prev]
            if len(add) > len(lam):
                lam = lam + [0] * (len(add) - len(lam))
            for i, c in enumerate(add):
                lam[i] ^= c
    while len(lam) > 1 and lam[-1] == 0:
        lam.pop()
    deg = len(lam) - 1

    n_errors = deg - len(era)
    if n_errors < 0 or 2 * n_errors + len(era) > nsyn:
        raise DecodeFailure("error locator degree inconsistent with redundancy")

    # errata positions: Chien search (skipped when BM added nothing to Gamma)
    if had_discrepancy:
        positions = []
        for i0 in range(p.N):
            xinv_log = (i0 + 1) % n  # log of X^{-1} = alpha^{-(N-1-i0)}
            acc = 0
            for c in reversed(lam):
                acc = (exp2[log[acc] + xinv_log] if acc else 0) ^ c
            if acc == 0:
                positions.append(i0)
        if len(positions) != deg:
            raise DecodeFailure("locator roots do not match its degree")
    else:
        positions = [pos - 1 for pos in era]

    # Forney: Omega = S(x) * lam(x) mod x^nsyn ; e = Omega(X^-1) / lam'(X^-1)
    omega = [0] * nsyn
    for i, c in enumerate(lam):
        if c == 0 or i >= nsyn:
            continue
        cl = log[c]
        for j, s in enumerate(synd[: nsyn - i]):
            if s:
                omega[i + j] ^= exp2[log[s] + cl]
    while len(omega) > 1 and omega[-1] == 0:
        omega.pop()
    lam_deriv = [lam[i] for i in range(1, len(lam), 2)]  # coefficients of even powers

    magnitudes = []
    for i0 in positions:
        xinv = exp2[(i0 + 1) % n]
        num = _poly_eval(omega, xinv, f)
        # lam'(x) = sum over odd i of lam_i x^(i-1); evaluate in x^2
        x2 = exp2[(2 * (i0 + 1)) % n]
        den = _poly_eval(lam_deriv, x2, f)
        if den == 0:
            raise DecodeFailure("Forney denominator vanished")
        magnitudes.append(f.div(num, den))

    for i0, e in zip(positions, magnitudes):
        w[i0] ^= e

    # recheck: corrected syndromes must vanish
    for j in range(nsyn):
        acc = synd[j]
        for i0, e in zip(positions, magnitudes):
            if e:
                acc ^= exp2[(log[e] + (j + 1) * ((p.N - 1 - i0) % n)) % n]
        if acc:
            raise DecodeFailure("corrected word is not a codeword")

    return np.array(w[: p.K], dtype=np.int64)
