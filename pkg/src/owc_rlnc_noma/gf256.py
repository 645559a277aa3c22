"""Arithmetic in the 256-element Galois field GF(2^8).

Field elements are single bytes read as polynomials over GF(2), reduced
modulo x^8 + x^4 + x^3 + x + 1 (bit pattern 0x11B). Addition is XOR, so
every element is its own additive inverse. Multiplication and inversion
go through log/antilog tables built once at import; vectorized variants
operate on numpy uint8 arrays and back the batched codec kernels.
"""

from __future__ import annotations

import numpy as np

REDUCING_POLY = 0x11B
GENERATOR = 0x03  # primitive element of GF(2^8) under 0x11B


def _mul_bitwise(a: int, b: int) -> int:
    """Carry-less multiply with shift-and-reduce; used only to build tables."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= REDUCING_POLY
    return r


_ZERO_LOG = 600  # sentinel: any sum involving it lands in the zero zone below


def _build_tables():
    exp = np.zeros(2 * _ZERO_LOG + 1, dtype=np.uint8)
    log = np.full(256, _ZERO_LOG, dtype=np.int16)  # log(0) = sentinel
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x = _mul_bitwise(x, GENERATOR)
    if x != 1:
        raise AssertionError("generator does not have order 255")
    exp[255:509] = exp[:254]  # exp[s] == g^(s mod 255) for any log-sum s <= 508
    # exp[509:] stays 0, so sums touching a zero operand decode to 0 maskless
    return exp, log


_EXP, _LOG = _build_tables()
_EXP_LIST = _EXP.tolist()
_LOG_LIST = _LOG.tolist()


def gf_add(a: int, b: int) -> int:
    """Field addition (== subtraction): XOR of the byte values."""
    return a ^ b


def gf_mul(a: int, b: int) -> int:
    """Field product of two bytes."""
    if a == 0 or b == 0:
        return 0
    return _EXP_LIST[_LOG_LIST[a] + _LOG_LIST[b]]


def gf_inv(a: int) -> int:
    """Multiplicative inverse; zero has none."""
    if a == 0:
        raise ValueError("no inverse of zero")
    return _EXP_LIST[255 - _LOG_LIST[a]]


def gf_mul_vec(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise field product of uint8 arrays (broadcasting allowed)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    return _EXP[_LOG[a] + _LOG[b]]


def gf_inv_vec(a: np.ndarray) -> np.ndarray:
    """Elementwise inverse; zero entries map to zero (callers mask pivots)."""
    a = np.asarray(a, dtype=np.uint8)
    return np.where(a == 0, np.uint8(0), _EXP[(255 - _LOG[a]) % 255])


def full_rank_probability(f: int, tau: int) -> float:
    """Probability that a random f x tau matrix over GF(256) has rank f.

    Entries i.i.d. uniform over the field. Returns 0 exactly when tau < f
    (rank cannot exceed the number of received combinations).
    """
    if f < 1:
        raise ValueError("f must be >= 1")
    if tau < f:
        return 0.0
    p = 1.0
    for i in range(f):
        p *= 1.0 - 256.0 ** (i - tau)
    return p
