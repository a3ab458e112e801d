"""Table-driven arithmetic over the binary extension field GF(2^m)."""

from __future__ import annotations

import numpy as np

# Conventional primitive polynomials (bitmask, degree m term included).
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


class FieldTables:
    """GF(2^m) with exp/log lookup tables generated by the element alpha = x (value 2)."""

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 2 <= m <= 12:
            raise ValueError("field degree m must be in [2, 12]")
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLY[m]
        if primitive_poly.bit_length() != m + 1:
            raise ValueError("primitive_poly must have degree m")
        self.m = m
        self.order = 1 << m
        self.n = self.order - 1  # multiplicative group order
        self.primitive_poly = primitive_poly

        exp = [0] * self.n
        log = [0] * self.order
        x = 1
        for i in range(self.n):
            if x == 1 and i > 0:
                raise ValueError("polynomial is not primitive (period %d < %d)" % (i, self.n))
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= primitive_poly
        if x != 1:
            raise ValueError("polynomial is not primitive")

        self.exp_table = exp
        self.log_table = log
        # Doubled exp list lets scalar mul/div skip the modulo in the hot path.
        self._exp2 = exp + exp
        # numpy mirrors for vectorized codeword arithmetic
        self.exp_np = np.array(exp + exp, dtype=np.int64)
        self.log_np = np.array(log, dtype=np.int64)

    # ----- scalar ops (python ints, used by the decoder inner loops) -----

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp2[self.log_table[a] + self.log_table[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero field element")
        if a == 0:
            return 0
        return self._exp2[self.log_table[a] - self.log_table[b] + self.n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp2[self.n - self.log_table[a]]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 to a non-positive power")
            return 0
        return self.exp_table[(self.log_table[a] * e) % self.n]

    # ----- vectorized ops over numpy integer arrays -----

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp_np[self.log_np[a] + self.log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)


def build_field(m: int, primitive_poly: int | None = None) -> FieldTables:
    """Build GF(2^m); rejects non-primitive generating polynomials."""
    return FieldTables(m, primitive_poly)


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(a: int, b: int, f: FieldTables) -> int:
    return f.mul(a, b)


def gf_div(a: int, b: int, f: FieldTables) -> int:
    return f.div(a, b)


def gf_inv(a: int, f: FieldTables) -> int:
    return f.inv(a)


def gf_pow(a: int, e: int, f: FieldTables) -> int:
    return f.pow(a, e)
