"""Seeded packet-level Monte-Carlo estimation of total success probability.

Every receiver sees an independent Bernoulli erasure process whose
per-attempt failure probability is the single-attempt closed-form value,
so the simulator and the corrected analytic layer share one parameter
per user. Plain schemes retransmit each of the f frame packets up to
v_max times; coded schemes transmit tau coded packets built by the real
GF(2^8) codec, and a user succeeds only when Gauss-Jordan decoding of
whatever arrived reproduces the source payloads byte-exactly.

Randomness contract: one counter-based Philox stream per (seed, scheme,
user index, stream tag), derived through numpy SeedSequence spawn keys.
Draw order within a stream is fixed by array layout (trial-major), so
estimates do not depend on evaluation order, and parallelizing across
schemes, users or sweep points cannot change any result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rlnc import CodedPacket, DecoderState, Generation, combine, decode_batch

SCHEME_CODES = {"NOMA": 0, "OMA": 1, "RLNC-NOMA": 2, "RLNC-OMA": 3}


@dataclass(frozen=True)
class TrialConfig:
    """One Monte-Carlo estimation task."""

    scheme: str
    per_user_attempt_failure: dict[str, float]
    f: int = 3
    v_max: int = 2
    tau: int = 4
    trials: int = 10_000
    seed: int = 0
    payload_len: int = 8  # bytes per source packet in the coded simulation
    stream_tag: int = 0  # extra key (e.g. sweep point index) for independence

    def __post_init__(self):
        if self.scheme not in SCHEME_CODES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.f < 1 or self.v_max < 1 or self.tau < 1 or self.payload_len < 1:
            raise ValueError("f, v_max, tau and payload_len must be >= 1")
        for uid, q in self.per_user_attempt_failure.items():
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"attempt failure of {uid} outside [0, 1]")


@dataclass(frozen=True)
class EstimateResult:
    p_hat: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class ComparisonVerdict:
    passed: bool
    z: float
    analytic: float
    empirical: float
    tolerance: float  # 3 * effective stderr


def user_stream(
    seed: int, scheme: str, user_index: int, stream_tag: int = 0
) -> np.random.Generator:
    """Philox generator keyed by (seed, scheme, user, tag)."""
    ss = np.random.SeedSequence(
        entropy=seed, spawn_key=(SCHEME_CODES[scheme], user_index, stream_tag)
    )
    return np.random.Generator(np.random.Philox(ss))


def _result(success: np.ndarray, cfg: TrialConfig) -> EstimateResult:
    p_hat = float(success.mean()) if success.size else 1.0
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / cfg.trials)
    return EstimateResult(p_hat=p_hat, stderr=stderr, trials=cfg.trials, seed=cfg.seed)


def simulate_plain(cfg: TrialConfig) -> EstimateResult:
    """Estimate total success for NOMA or OMA.

    A trial succeeds when every user receives each of the f packets
    within v_max attempts, each attempt succeeding independently with
    probability 1 - q_user.
    """
    if cfg.scheme not in ("NOMA", "OMA"):
        raise ValueError(f"simulate_plain got scheme {cfg.scheme!r}")
    total = np.ones(cfg.trials, dtype=bool)
    for idx, q in enumerate(cfg.per_user_attempt_failure.values()):
        rng = user_stream(cfg.seed, cfg.scheme, idx, cfg.stream_tag)
        draws = rng.random((cfg.trials, cfg.f, cfg.v_max))
        total &= (draws < 1.0 - q).any(axis=2).all(axis=1)
    return _result(total, cfg)


def simulate_rlnc(cfg: TrialConfig, engine: str = "batch") -> EstimateResult:
    """Estimate total success for RLNC-NOMA or RLNC-OMA with the real codec.

    Per trial and user, a fresh generation of f random payloads is
    encoded into tau coded packets; each arrives independently with
    probability 1 - q_user; the user succeeds iff the arrived packets
    reach rank f and decode byte-exactly. The default engine runs the
    identical algebra vectorized across trials; the scalar engine walks
    the packet-object codec and exists for cross-checking.
    """
    if cfg.scheme not in ("RLNC-NOMA", "RLNC-OMA"):
        raise ValueError(f"simulate_rlnc got scheme {cfg.scheme!r}")
    if engine not in ("batch", "scalar"):
        raise ValueError(f"unknown engine {engine!r}")
    total = np.ones(cfg.trials, dtype=bool)
    for idx, q in enumerate(cfg.per_user_attempt_failure.values()):
        rng = user_stream(cfg.seed, cfg.scheme, idx, cfg.stream_tag)
        if engine == "batch":
            arrivals = rng.random((cfg.trials, cfg.tau)) < 1.0 - q
            coeffs = rng.integers(0, 256, (cfg.trials, cfg.tau, cfg.f), dtype=np.uint8)
            payloads = rng.integers(
                0, 256, (cfg.trials, cfg.f, cfg.payload_len), dtype=np.uint8
            )
            success, _ = decode_batch(coeffs, payloads, arrivals)
            total &= success
        else:
            total &= _scalar_user_success(rng, q, cfg)
    return _result(total, cfg)


def _scalar_user_success(rng: np.random.Generator, q: float, cfg: TrialConfig) -> np.ndarray:
    out = np.zeros(cfg.trials, dtype=bool)
    for t in range(cfg.trials):
        arrived = rng.random(cfg.tau) < 1.0 - q
        gen = Generation(
            tuple(
                rng.integers(0, 256, cfg.payload_len, dtype=np.uint8).tobytes()
                for _ in range(cfg.f)
            )
        )
        state = DecoderState(cfg.f, cfg.payload_len)
        for j in range(cfg.tau):
            coeffs = rng.integers(0, 256, cfg.f, dtype=np.uint8).tobytes()
            if arrived[j]:
                state.absorb(CodedPacket(coeffs, combine(gen, coeffs)))
        out[t] = state.rank == cfg.f and state.decode() == list(gen.payloads)
    return out


def compare(analytic: float, empirical: EstimateResult) -> ComparisonVerdict:
    """Three-sigma agreement check between a closed form and an estimate.

    The standard error is floored at 1/trials so a degenerate estimate
    (p_hat of exactly 0 or 1) still has a nonzero acceptance window.
    """
    stderr_eff = max(empirical.stderr, 1.0 / empirical.trials)
    diff = abs(analytic - empirical.p_hat)
    return ComparisonVerdict(
        passed=diff <= 3.0 * stderr_eff,
        z=diff / stderr_eff,
        analytic=analytic,
        empirical=empirical.p_hat,
        tolerance=3.0 * stderr_eff,
    )
