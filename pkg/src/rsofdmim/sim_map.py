"""Index-bit <-> puncturing-vector mapping (subcarrier index modulation codebook).

The codebook is the first 2^p1 S-subsets of {1..N} in lexicographic order,
addressed by combinadic ranking/unranking, so no table is stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PuncturingVector:
    positions: tuple  # sorted subcarrier/codeword indices in {1..N}
    rank: int


def index_bits_capacity(N: int, S: int) -> int:
    """Number of index bits p1 = floor(log2 C(N,S))."""
    if not 0 <= S <= N:
        raise ValueError("need 0 <= S <= N")
    c = math.comb(N, S)
    return c.bit_length() - 1


def bits_to_puncture(bits: int, N: int, S: int) -> PuncturingVector:
    """Unrank `bits` to the S-subset of {1..N} with that lexicographic rank."""
    p1 = index_bits_capacity(N, S)
    if not 0 <= bits < (1 << p1) or (S == 0 and bits != 0):
        raise ValueError("bits out of codebook range [0, 2^p1)")
    r = bits
    positions = []
    v = 1
    for i in range(S, 0, -1):
        # advance v until the block of subsets starting at v covers rank r
        count = math.comb(N - v, i - 1)
        while count <= r:
            r -= count
            v += 1
            count = math.comb(N - v, i - 1)
        positions.append(v)
        v += 1
    return PuncturingVector(tuple(positions), bits)


def puncture_to_bits(positions, N: int, S: int) -> int:
    """Lexicographic rank of an S-subset, reduced mod 2^p1 (receiver fallback)."""
    pos = sorted(positions)
    if len(pos) != S or len(set(pos)) != S:
        raise ValueError("need S distinct positions")
    if pos and (pos[0] < 1 or pos[-1] > N):
        raise ValueError("positions must lie in {1..N}")
    if S == 0:
        return 0
    # rank = C(N,S) - 1 - sum_j C(N - theta_j, S - j + 1)
    rank = math.comb(N, S) - 1
    for j, theta in enumerate(pos, start=1):
        rank -= math.comb(N - theta, S - j + 1)
    p1 = index_bits_capacity(N, S)
    return rank % (1 << p1)
