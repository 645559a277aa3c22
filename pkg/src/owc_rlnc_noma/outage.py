"""Closed-form packet failure and frame success probabilities.

Per-user outage is driven by a single intensity

    eps = G / P_allocated,   G = t * sigma^2 / (mu * R^2 * h^2)

where t is the capture threshold the scheme must clear. A user whose
allocation cannot clear the threshold at all (h = 0, or a weak user with
P2 <= P1 * t) is *infeasible*: eps = inf and every failure probability
is pinned to 1. Infeasibility is a value here, never an exception.

Two formula modes exist end to end:

* ``corrected`` (default): per-attempt failure q = 1 - exp(-eps) shared
  with the simulator; a packet sent V times fails with q^V; an RLNC user
  decodes when at least f of tau coded packets arrive, weighted by the
  true GF(256) full-rank probability of the arrived coefficient vectors.
  These expressions are the exact expectations of the packet-level
  simulator, which is what makes the analytic/empirical cross-check a
  meaningful gate.
* ``literal``: the legacy closed forms kept verbatim for comparison
  plots: Poisson-style V-transmission failure, the C(f-1, i) binomial
  coefficient in the RLNC success sum (algebraically 1 - q^(tau-f+1)),
  and a raw B/2 multiplier on the OMA intensity. Outputs are clamped to
  [0, 1]; dimensional quirks are preserved on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .channel import NoiseModel, UserTerminal
from .gf256 import full_rank_probability
from .noma import PowerAllocation

INFEASIBLE = math.inf

PLAIN_SCHEMES = ("NOMA", "OMA")
RLNC_SCHEMES = ("RLNC-NOMA", "RLNC-OMA")
ALL_SCHEMES = PLAIN_SCHEMES + RLNC_SCHEMES
FORMULA_MODES = ("literal", "corrected")


@dataclass(frozen=True)
class CaptureConfig:
    """Minimum spectral efficiency a packet must reach to be captured."""

    delta_over_b: float  # bits/s/Hz
    bandwidth: float  # Hz
    g_count: int = 2

    def __post_init__(self):
        if self.delta_over_b <= 0.0:
            raise ValueError("delta_over_b must be positive")
        if self.bandwidth <= 0.0:
            raise ValueError("bandwidth must be positive")
        if self.g_count < 1:
            raise ValueError("g_count must be >= 1")


@dataclass(frozen=True)
class OutageParams:
    """Transmission accounting shared by the analytic and simulated layers."""

    epsilon: float
    v_max: int = 2
    tau: int = 4
    f: int = 3

    def __post_init__(self):
        if self.v_max < 1 or self.tau < 1 or self.f < 1:
            raise ValueError("v_max, tau and f must all be >= 1")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0 (or inf for infeasible)")

    @property
    def infeasible(self) -> bool:
        return math.isinf(self.epsilon)


@dataclass(frozen=True)
class SuccessReport:
    scheme: str
    formula_mode: str
    per_user_failure: dict[str, float]
    total_success: float


def is_infeasible(eps: float) -> bool:
    return math.isinf(eps)


def outage_threshold(cfg: CaptureConfig, scheme: str) -> float:
    """Capture threshold t = 2^(delta/B) - 1; OMA pays for its B/G slice.

    Squeezing delta/B through a G-times narrower band raises the OMA
    threshold to 2^(G * delta/B) - 1.
    """
    if scheme in ("NOMA", "RLNC-NOMA"):
        return 2.0 ** cfg.delta_over_b - 1.0
    if scheme in ("OMA", "RLNC-OMA"):
        return 2.0 ** (cfg.g_count * cfg.delta_over_b) - 1.0
    raise ValueError(f"unknown scheme {scheme!r}")


def channel_gain_demand(
    h: float, t: float, sigma2: float, responsivity: float, mu: float = 1.0
) -> float:
    """Power a user must be allocated to clear threshold t: t sigma^2 / (mu R^2 h^2).

    Out-of-view users (h = 0) need infinite power and come back INFEASIBLE.
    """
    if t < 0.0:
        raise ValueError("threshold must be >= 0")
    if h == 0.0:
        return INFEASIBLE if t > 0.0 else 0.0
    return t * sigma2 / (mu * (responsivity * h) ** 2)


def epsilon_for(
    user: UserTerminal,
    h: float,
    alloc: PowerAllocation,
    scheme: str,
    capture: CaptureConfig,
    noise: NoiseModel,
    mode: str = "corrected",
) -> float:
    """Outage intensity of one user under one scheme.

    NOMA strong: eps = G / P1. NOMA weak: eps = G / (P2 - P1 t), and the
    user is infeasible once P2 <= P1 t (interference alone exceeds the
    capture margin). OMA: eps = G_o / P_g with the threshold and noise
    taken on the B/G slice; in literal mode the raw (B/2) multiplier is
    applied to the full-band demand instead.
    """
    if mode not in FORMULA_MODES:
        raise ValueError(f"unknown formula mode {mode!r}")
    if scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    p_g = alloc.p1 if user.group == 1 else alloc.p2
    if scheme in ("NOMA", "RLNC-NOMA"):
        t = outage_threshold(capture, scheme)
        demand = channel_gain_demand(h, t, noise.variance, user.responsivity, user.mu)
        if is_infeasible(demand):
            return INFEASIBLE
        if user.group == 1:
            return demand / alloc.p1
        margin = alloc.p2 - alloc.p1 * t
        return demand / margin if margin > 0.0 else INFEASIBLE
    if mode == "corrected":
        t_o = outage_threshold(capture, scheme)
        sigma2_split = noise.n0 * (noise.bandwidth / capture.g_count)
        demand = channel_gain_demand(h, t_o, sigma2_split, user.responsivity, user.mu)
    else:
        t = 2.0 ** capture.delta_over_b - 1.0
        demand = channel_gain_demand(h, t, noise.variance, user.responsivity, user.mu)
        if not is_infeasible(demand):
            demand *= noise.bandwidth / 2.0
    return demand if is_infeasible(demand) else demand / p_g


def packet_failure(eps: float, v_max: int) -> float:
    """Failure probability of a packet allowed v_max successive transmissions.

    Evaluates 1 - exp(-eps) * sum_{v=1}^{V} eps^(v-1) / (v-1)!, the upper
    Poisson tail P(N >= V) for N ~ Poisson(eps), clamped to [0, 1].
    Infeasible eps gives certain failure.
    """
    if v_max < 1:
        raise ValueError("v_max must be >= 1")
    if is_infeasible(eps):
        return 1.0
    if eps < 0.0:
        raise ValueError("eps must be >= 0")
    acc = math.fsum(eps**v / math.factorial(v) for v in range(v_max))
    return min(1.0, max(0.0, 1.0 - math.exp(-eps) * acc))


def attempt_failure(eps: float) -> float:
    """Single-attempt failure q = packet_failure(eps, 1); the bridge parameter
    shared between the closed forms and the Monte-Carlo simulator."""
    return packet_failure(eps, 1)


def _log_product(terms) -> float:
    logs = []
    for t in terms:
        if t <= 0.0:
            return 0.0
        logs.append(math.log(t))
    return math.exp(math.fsum(logs))


def success_noma(failures: Mapping[str, float], f: int) -> float:
    """Frame success for plain transmission: prod_users (1 - delta)^f.

    Products run in log space so large user populations do not underflow.
    """
    if f < 1:
        raise ValueError("f must be >= 1")
    for uid, d in failures.items():
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"failure probability of {uid} outside [0, 1]")
    return _log_product((1.0 - d) ** f for d in failures.values())


def _per_user_rlnc(delta: float, f: int, tau: int, mode: str) -> float:
    if mode == "corrected":
        # P(at least f of tau arrivals), arrivals i.i.d. Bernoulli(1 - delta)
        p = 1.0 - delta
        fail = math.fsum(
            math.comb(tau, i) * p**i * delta ** (tau - i) for i in range(f)
        )
        return min(1.0, max(0.0, 1.0 - fail))
    # literal: C(f-1, i) coefficient as printed; telescopes to delta^(tau-f+1)
    terms = []
    for i in range(f):
        e = tau - i
        if delta == 0.0:
            terms.append(1.0 if e == 0 else (0.0 if e > 0 else math.inf))
        else:
            terms.append(delta**e)
        terms[-1] *= math.comb(f - 1, i) * (1.0 - delta) ** i
    return min(1.0, max(0.0, 1.0 - math.fsum(terms)))


def success_rlnc(
    failures: Mapping[str, float], f: int, tau: int, mode: str = "corrected"
) -> float:
    """Frame success for coded transmission, idealizing decode as certain.

    Corrected mode needs tau >= f (fewer coded packets than the frame can
    never decode) and counts trials where at least f of the tau coded
    packets arrive; literal mode reproduces the legacy C(f-1, i) sum and
    clamps. Per-user failure inputs are single-attempt values.
    """
    if mode not in FORMULA_MODES:
        raise ValueError(f"unknown formula mode {mode!r}")
    if f < 1 or tau < 1:
        raise ValueError("f and tau must be >= 1")
    if mode == "corrected" and tau < f:
        raise ValueError(f"corrected mode needs tau >= f, got tau={tau} f={f}")
    for uid, d in failures.items():
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"failure probability of {uid} outside [0, 1]")
    return _log_product(_per_user_rlnc(d, f, tau, mode) for d in failures.values())


def success_rlnc_decode_aware(failures: Mapping[str, float], f: int, tau: int) -> float:
    """Coded-frame success including real GF(256) decode physics.

    Weighs each arrival count n by the probability that n uniformly drawn
    coefficient vectors span the frame. This is the exact expectation of
    the packet-level simulator and the corrected-mode analytic used by
    the sweep.
    """
    if f < 1 or tau < 1:
        raise ValueError("f and tau must be >= 1")
    per_user = []
    for uid, d in failures.items():
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"failure probability of {uid} outside [0, 1]")
        p = 1.0 - d
        s = math.fsum(
            math.comb(tau, n) * p**n * d ** (tau - n) * full_rank_probability(f, n)
            for n in range(f, tau + 1)
        )
        per_user.append(min(1.0, max(0.0, s)))
    return _log_product(per_user)


def scheme_success_report(
    scheme: str,
    epsilons: Mapping[str, float],
    f: int,
    tau: int,
    v_max: int,
    mode: str = "corrected",
) -> SuccessReport:
    """Assemble per-user failures and the total success for one scheme.

    Plain schemes: corrected mode uses the Bernoulli bridge (a packet
    fails only when all v_max attempts fail, each with the shared
    single-attempt probability); literal mode evaluates the V-transmission
    Poisson form directly. Coded schemes always consume single-attempt
    failures; corrected mode weighs in the decode physics, literal mode
    keeps the printed coefficient convention.
    """
    if scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if mode not in FORMULA_MODES:
        raise ValueError(f"unknown formula mode {mode!r}")
    q = {uid: attempt_failure(e) for uid, e in epsilons.items()}
    if scheme in PLAIN_SCHEMES:
        if mode == "corrected":
            failures = {uid: qu**v_max for uid, qu in q.items()}
        else:
            failures = {uid: packet_failure(e, v_max) for uid, e in epsilons.items()}
        total = success_noma(failures, f)
    elif mode == "corrected":
        failures = q
        total = success_rlnc_decode_aware(q, f, tau)
    else:
        failures = q
        total = success_rlnc(q, f, tau, mode="literal")
    return SuccessReport(
        scheme=scheme, formula_mode=mode, per_user_failure=failures, total_success=total
    )
