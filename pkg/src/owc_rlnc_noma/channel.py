"""Indoor line-of-sight optical channel geometry.

A single ceiling access point illuminates a horizontal receiving plane.
Receivers hold their photodiode pointing straight up (elevation 90°), so
the irradiance angle at the LED equals the incidence angle at the
photodiode. The Lambertian gain is

    h = (m + 1) * A_pd / (2 pi d^2) * cos(theta)^m * cos(theta)

inside the receiver field of view and exactly zero beyond it. Diffuse
reflections are not modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class AccessPoint:
    """Ceiling LED transmitter."""

    position: tuple[float, float, float]
    semi_angle_half_power: float  # degrees
    max_optical_power: float  # Watts

    def __post_init__(self):
        if not 0.0 < self.semi_angle_half_power < 90.0:
            raise ValueError("semi_angle_half_power must be in (0, 90) degrees")
        if self.max_optical_power <= 0.0:
            raise ValueError("max_optical_power must be positive")


@dataclass(frozen=True)
class UserTerminal:
    """Receiver position plus photodetector parameters."""

    id: str
    position: tuple[float, float, float]
    fov: float  # degrees, half-angle
    pd_area: float  # m^2
    responsivity: float  # A/W
    mu: float = 1.0
    group: int = 1

    def __post_init__(self):
        if not 0.0 < self.fov <= 90.0:
            raise ValueError(f"fov must be in (0, 90] degrees, got {self.fov}")
        if self.pd_area <= 0.0 or self.responsivity <= 0.0 or self.mu <= 0.0:
            raise ValueError("pd_area, responsivity and mu must be positive")


@dataclass(frozen=True)
class ChannelGain:
    h: float
    distance: float
    irradiance_angle: float  # degrees
    incidence_angle: float  # degrees
    in_fov: bool


@dataclass(frozen=True)
class NoiseModel:
    """AWGN receiver noise, variance = N0 * effective bandwidth."""

    n0: float  # W/Hz
    bandwidth: float  # Hz

    def __post_init__(self):
        if self.n0 <= 0.0 or self.bandwidth <= 0.0:
            raise ValueError("n0 and bandwidth must be positive")

    @property
    def variance(self) -> float:
        return noise_variance(self.n0, self.bandwidth)


def lambert_index(semi_angle_half_power: float) -> float:
    """Lambert order m = -1 / log2(cos(half-power semi-angle))."""
    if not 0.0 < semi_angle_half_power < 90.0:
        raise ValueError("semi-angle at half power must be in (0, 90) degrees")
    return -1.0 / math.log2(math.cos(math.radians(semi_angle_half_power)))


def los_gain(ap: AccessPoint, user: UserTerminal) -> ChannelGain:
    """Line-of-sight gain between the access point and one receiver.

    Requires the receiver strictly below the AP plane; the up-pointing
    photodiode makes both angles equal the polar angle of the AP-user
    line. Past the field of view the gain is exactly zero.
    """
    dx = user.position[0] - ap.position[0]
    dy = user.position[1] - ap.position[1]
    dz = ap.position[2] - user.position[2]
    if dz <= 0.0:
        raise ValueError(f"user {user.id} must sit below the access point plane")
    d = math.sqrt(dx * dx + dy * dy + dz * dz)
    if d == 0.0:
        raise ValueError("coincident AP and user positions")
    theta = math.degrees(math.acos(dz / d))
    in_fov = theta <= user.fov
    if in_fov:
        m = lambert_index(ap.semi_angle_half_power)
        cos_t = dz / d
        h = (m + 1.0) * user.pd_area / (2.0 * math.pi * d * d) * cos_t**m * cos_t
    else:
        h = 0.0
    return ChannelGain(
        h=h, distance=d, irradiance_angle=theta, incidence_angle=theta, in_fov=in_fov
    )


def noise_variance(n0: float, bandwidth_effective: float) -> float:
    """Noise power (W) over the effective bandwidth actually used."""
    if n0 <= 0.0 or bandwidth_effective <= 0.0:
        raise ValueError("n0 and bandwidth must be positive")
    return n0 * bandwidth_effective
