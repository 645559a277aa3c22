"""Power allocation, grouping and achievable rates for two multicast groups.

Group 1 holds the strong (near) users and receives the smaller power
share P1 = alpha * P_t; group 2 holds the weak users and receives the
remainder. Strong users cancel the group-2 signal before decoding, weak
users treat the group-1 signal as noise. OMA gives each group an
exclusive bandwidth slice B/G instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .channel import NoiseModel, UserTerminal


class NomaOrderingWarning(UserWarning):
    """Power split no longer favors the weak group (alpha >= 0.5)."""


@dataclass(frozen=True)
class PowerAllocation:
    alpha: float
    p_total: float
    p1: float
    p2: float


def allocate_power(alpha: float, p_total: float) -> PowerAllocation:
    """Split the power budget: P1 = alpha * P_t for the strong group.

    alpha must lie strictly inside (0, 1). Values >= 0.5 break the NOMA
    ordering P2 > P1; they are allowed (the sweep explores them) but emit
    a NomaOrderingWarning.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if p_total <= 0.0:
        raise ValueError("p_total must be positive")
    if alpha >= 0.5:
        warnings.warn(
            f"alpha={alpha:g} gives the strong group at least half the power; "
            "NOMA ordering P2 > P1 is violated",
            NomaOrderingWarning,
            stacklevel=2,
        )
    p1 = alpha * p_total
    return PowerAllocation(alpha=alpha, p_total=p_total, p1=p1, p2=p_total - p1)


@dataclass(frozen=True)
class SuperpositionConstraint:
    i_dc: float
    a_max: float
    per_user_amplitudes: tuple[float, ...]  # sqrt(P_k) terms


@dataclass(frozen=True)
class SuperpositionReport:
    nonnegativity_ok: bool
    eye_safety_ok: bool
    slack_nonnegativity: float
    slack_eye_safety: float

    @property
    def ok(self) -> bool:
        return self.nonnegativity_ok and self.eye_safety_ok


def validate_superposition(c: SuperpositionConstraint) -> SuperpositionReport:
    """Check sum(sqrt(P_k)) against the DC bias and intensity ceiling.

    Advisory only: returns slack values, never raises.
    """
    total = math.fsum(c.per_user_amplitudes)
    slack_bias = c.i_dc - total
    slack_eye = (c.a_max - c.i_dc) - total
    return SuperpositionReport(
        nonnegativity_ok=slack_bias >= 0.0,
        eye_safety_ok=slack_eye >= 0.0,
        slack_nonnegativity=slack_bias,
        slack_eye_safety=slack_eye,
    )


def assign_groups(gains: Mapping[str, float], g_count: int) -> dict[str, int]:
    """Sort users by gain and split into contiguous groups.

    The weakest block becomes the highest group index (the weak group),
    the strongest block group 1, matching the strong/weak numbering used
    everywhere else. Ties break on user id ascending (natural order, so
    u2 precedes u10). This is a utility; scenario configs carry explicit
    memberships because measured gains do not always reproduce a declared
    near/far split.
    """
    if g_count < 1:
        raise ValueError("g_count must be >= 1")
    if len(gains) % g_count != 0:
        raise ValueError(
            f"{len(gains)} users cannot be split into {g_count} equal groups"
        )
    block = len(gains) // g_count
    ordered = sorted(gains, key=lambda uid: (gains[uid], len(uid), uid))
    out: dict[str, int] = {}
    for pos, uid in enumerate(ordered):
        out[uid] = g_count - pos // block
    return out


def _snr_rate(bandwidth: float, ratio: float) -> float:
    return bandwidth * math.log2(1.0 + ratio)


def rate_noma_strong(
    h: float, p1: float, sigma2: float, bandwidth: float, responsivity: float, mu: float = 1.0
) -> float:
    """Post-SIC rate of a group-1 user: B log2(1 + mu R^2 h^2 P1 / sigma^2)."""
    return _snr_rate(bandwidth, mu * (responsivity * h) ** 2 * p1 / sigma2)


def rate_noma_weak(
    h: float,
    p1: float,
    p2: float,
    sigma2: float,
    bandwidth: float,
    responsivity: float,
    mu: float = 1.0,
) -> float:
    """Rate of a group-2 user with the group-1 signal treated as noise.

    Interference power is R^2 h^2 P1 (squared responsivity, keeping the
    numerator and denominator dimensionally consistent).
    """
    rh2 = (responsivity * h) ** 2
    return _snr_rate(bandwidth, mu * rh2 * p2 / (rh2 * p1 + sigma2))


def rate_oma(
    h: float,
    p_g: float,
    sigma2_split: float,
    bandwidth: float,
    g_count: int,
    responsivity: float,
    mu: float = 1.0,
) -> float:
    """Rate on an exclusive B/G slice; sigma2_split is the noise on B/G."""
    if g_count < 1:
        raise ValueError("g_count must be >= 1")
    ratio = mu * (responsivity * h) ** 2 * p_g / sigma2_split
    return _snr_rate(bandwidth / g_count, ratio)


@dataclass(frozen=True)
class RateReport:
    scheme: str
    per_user_rate: dict[str, float]
    group_sum_rate: dict[int, float]


def sum_rates(
    users: Iterable[tuple[UserTerminal, float]],
    alloc: PowerAllocation,
    noise: NoiseModel,
    scheme: str,
    g_count: int = 2,
) -> RateReport:
    """Per-user and per-group sum rates for one scheme.

    Args:
        users: (terminal, channel gain) pairs; terminal.group selects the
            power level and rate expression.
        scheme: "noma" or "oma".
    """
    if scheme not in ("noma", "oma"):
        raise ValueError(f"unknown scheme {scheme!r}")
    sigma2 = noise.variance
    sigma2_split = noise.n0 * (noise.bandwidth / g_count)
    per_user: dict[str, float] = {}
    group_rates: dict[int, list[float]] = {}
    power = {1: alloc.p1, 2: alloc.p2}
    for user, h in users:
        if scheme == "noma":
            if user.group == 1:
                r = rate_noma_strong(
                    h, alloc.p1, sigma2, noise.bandwidth, user.responsivity, user.mu
                )
            else:
                r = rate_noma_weak(
                    h, alloc.p1, alloc.p2, sigma2, noise.bandwidth, user.responsivity, user.mu
                )
        else:
            r = rate_oma(
                h,
                power[user.group],
                sigma2_split,
                noise.bandwidth,
                g_count,
                user.responsivity,
                user.mu,
            )
        per_user[user.id] = r
        group_rates.setdefault(user.group, []).append(r)
    return RateReport(
        scheme=scheme,
        per_user_rate=per_user,
        group_sum_rate={g: math.fsum(v) for g, v in group_rates.items()},
    )
