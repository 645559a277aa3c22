"""Random linear network codec over GF(2^8).

A frame of ``f`` source packets (a :class:`Generation`) is encoded into
coded packets carrying a coefficient vector plus the coefficient-weighted
byte-wise combination of the source payloads. Receivers feed arriving
packets into a :class:`DecoderState`, an online Gauss-Jordan eliminator
that keeps its rows in reduced row-echelon form; once the rank reaches
``f`` the original payloads are recovered exactly.

Coefficients are drawn i.i.d. uniform over all 256 field values, so
linear dependence is possible (with the probability given by
:func:`owc_rlnc_noma.gf256.full_rank_probability`) and is handled by the
decoder rather than excluded at the encoder.

:func:`decode_batch` runs the same encode/eliminate/decode algebra across
a whole block of Monte-Carlo trials at once using vectorized table
lookups; it exists purely for throughput and is equivalence-tested
against the scalar path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf256 import gf_inv, gf_inv_vec, gf_mul_vec


@dataclass(frozen=True)
class Generation:
    """A frame of f equal-length source payloads."""

    payloads: tuple[bytes, ...]

    def __post_init__(self):
        if len(self.payloads) < 1:
            raise ValueError("a generation needs at least one source packet")
        n = len(self.payloads[0])
        if n < 1:
            raise ValueError("payload length must be >= 1")
        if any(len(p) != n for p in self.payloads):
            raise ValueError("all payloads in a generation must have equal length")

    @property
    def f(self) -> int:
        return len(self.payloads)

    @property
    def payload_len(self) -> int:
        return len(self.payloads[0])


@dataclass(frozen=True)
class CodedPacket:
    """Coefficient vector plus the combined payload it produces."""

    coeffs: bytes
    payload: bytes


class InsufficientRankError(RuntimeError):
    """Raised when decode is attempted below full rank; carries the rank."""

    def __init__(self, rank: int, f: int):
        super().__init__(f"insufficient degrees of freedom: rank {rank} < {f}")
        self.rank = rank
        self.f = f


def combine(gen: Generation, coeffs: bytes) -> bytes:
    """Coefficient-weighted GF(2^8) combination of the source payloads."""
    if len(coeffs) != gen.f:
        raise ValueError(f"expected {gen.f} coefficients, got {len(coeffs)}")
    acc = np.zeros(gen.payload_len, dtype=np.uint8)
    for c, payload in zip(coeffs, gen.payloads):
        if c:
            acc ^= gf_mul_vec(np.uint8(c), np.frombuffer(payload, dtype=np.uint8))
    return acc.tobytes()


def encode(gen: Generation, rng: np.random.Generator) -> CodedPacket:
    """Draw f uniform coefficients from ``rng`` and emit a coded packet.

    The same generator state always yields the same packet, which is what
    makes simulator runs reproducible.
    """
    coeffs = rng.integers(0, 256, size=gen.f, dtype=np.uint8).tobytes()
    return CodedPacket(coeffs=coeffs, payload=combine(gen, coeffs))


class DecoderState:
    """Online Gauss-Jordan eliminator over GF(2^8).

    Rows are augmented [coefficients | payload] vectors kept in reduced
    row-echelon form, indexed by pivot column. Rank never decreases and
    absorbing a dependent packet leaves the state unchanged. Single
    writer; all values handed out are copies or immutable.
    """

    def __init__(self, f: int, payload_len: int):
        if f < 1 or payload_len < 1:
            raise ValueError("f and payload_len must be >= 1")
        self.f = f
        self.payload_len = payload_len
        self._rows: dict[int, np.ndarray] = {}  # pivot column -> reduced row

    @property
    def rank(self) -> int:
        return len(self._rows)

    def absorb(self, pkt: CodedPacket) -> bool:
        """Row-reduce a packet into the state; True iff it was innovative."""
        if len(pkt.coeffs) != self.f:
            raise ValueError(
                f"coefficient length {len(pkt.coeffs)} does not match f={self.f}"
            )
        if len(pkt.payload) != self.payload_len:
            raise ValueError(
                f"payload length {len(pkt.payload)} does not match {self.payload_len}"
            )
        row = np.concatenate(
            [
                np.frombuffer(pkt.coeffs, dtype=np.uint8),
                np.frombuffer(pkt.payload, dtype=np.uint8),
            ]
        ).copy()
        for col in sorted(self._rows):
            if row[col]:
                row ^= gf_mul_vec(row[col], self._rows[col])
        lead = -1
        for col in range(self.f):
            if row[col]:
                lead = col
                break
        if lead < 0:
            return False
        row = gf_mul_vec(np.uint8(gf_inv(int(row[lead]))), row)
        for col, other in self._rows.items():
            if other[lead]:
                self._rows[col] = other ^ gf_mul_vec(other[lead], row)
        self._rows[lead] = row
        return True

    def decode(self) -> list[bytes]:
        """Return the f source payloads; requires full rank."""
        if self.rank < self.f:
            raise InsufficientRankError(self.rank, self.f)
        return [self._rows[col][self.f :].tobytes() for col in range(self.f)]

    def dump(self) -> str:
        """Hex view of the reduced rows, for test diagnostics."""
        lines = [f"rank={self.rank}/{self.f}"]
        for col in sorted(self._rows):
            row = self._rows[col]
            coeffs = row[: self.f].tobytes().hex(" ")
            payload = row[self.f :].tobytes().hex(" ")
            lines.append(f"pivot {col}: [{coeffs}] | {payload}")
        return "\n".join(lines)


def decode_batch(
    coeffs: np.ndarray, payloads: np.ndarray, arrivals: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized encode/decode of many independent trials.

    Args:
        coeffs: (T, tau, f) uint8, the per-trial encoding coefficients.
        payloads: (T, f, L) uint8, the per-trial source payloads.
        arrivals: (T, tau) bool, which coded packets reached the receiver.

    Returns:
        (success, rank): success[t] is True iff the arrived packets of
        trial t reach rank f and Gauss-Jordan decoding reproduces the
        source payloads byte-exactly; rank[t] is the achieved rank.

    Lost packets are represented as all-zero rows, which cannot alter the
    rank or the reduced rows, so the fixed (T, tau) shape stays exact.
    """
    coeffs = np.asarray(coeffs, dtype=np.uint8)
    payloads = np.asarray(payloads, dtype=np.uint8)
    arrivals = np.asarray(arrivals, dtype=bool)
    T, tau, f = coeffs.shape
    L = payloads.shape[2]

    # encode: coded[t, j, :] = sum_k coeffs[t, j, k] * payloads[t, k, :]
    coded = np.zeros((T, tau, L), dtype=np.uint8)
    for k in range(f):
        coded ^= gf_mul_vec(coeffs[:, :, k : k + 1], payloads[:, k : k + 1, :])

    aug = np.concatenate([coeffs, coded], axis=2)
    aug[~arrivals] = 0

    tidx = np.arange(T)
    used = np.zeros((T, tau), dtype=bool)
    pivrow = np.full((T, f), -1, dtype=np.int64)
    for c in range(f):
        col = aug[:, :, c]
        cand = (col != 0) & ~used
        has = cand.any(axis=1)
        r = np.where(has, cand.argmax(axis=1), 0)
        piv = gf_mul_vec(aug[tidx, r, :], gf_inv_vec(aug[tidx, r, c])[:, None])
        # rows to clear: every nonzero entry in this column except the pivot
        # row; trials without a pivot are masked out entirely
        factors = np.where(has[:, None], col, np.uint8(0))
        factors[tidx, r] = 0
        aug ^= gf_mul_vec(factors[:, :, None], piv[:, None, :])
        aug[tidx[has], r[has], :] = piv[has]
        used[tidx[has], r[has]] = True
        pivrow[:, c] = np.where(has, r, -1)

    rank = (pivrow >= 0).sum(axis=1).astype(np.int16)
    full = rank == f
    recovered = aug[tidx[:, None], np.clip(pivrow, 0, tau - 1), f:]
    success = full & (recovered == payloads).all(axis=(1, 2))
    return success, rank


def batch_rank(matrices: np.ndarray) -> np.ndarray:
    """Rank over GF(2^8) of a (T, n, f) batch of coefficient matrices."""
    matrices = np.asarray(matrices, dtype=np.uint8)
    T, n, f = matrices.shape
    dummy = np.zeros((T, f, 1), dtype=np.uint8)
    arrivals = np.ones((T, n), dtype=bool)
    _, rank = decode_batch(matrices, dummy, arrivals)
    return rank
