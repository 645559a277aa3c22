"""Scenario configuration: flat ``key = value`` files over built-in profiles.

The built-in ``table1`` profile is the reference indoor scenario: a 5 x 5
x 3 m room, one ceiling LED at (2.5, 2.5, 3) with 60° half-power
semi-angle and a 1 W budget, ten receivers at 0.85 m split into a near
multicast group (group 1) and a far one (group 2), 20 MHz bandwidth,
1e-21 W/Hz noise density and a 0.5 bits/s/Hz capture requirement.

With its literal 35° field of view the two farthest receivers sit outside
the view cone (incidence around 36.3° and 43.8°), their gain is exactly
zero and every total success probability is pinned to zero. That profile
is kept as-is; the ``paper-adjusted`` profile widens the field of view to
60° so all ten receivers contribute, and is what the validation sweeps
use. The discrepancy is surfaced, not silently patched.

Config files are UTF-8, one ``key = value`` per line, ``#`` starts a
comment. Users are declared as ``user.N.pos = x,y,z`` plus
``user.N.group = 1|2`` (optional per-user ``fov``, ``pd_area``,
``responsivity``, ``mu`` overrides). Declaring any user replaces the
whole built-in list. Unknown keys, malformed values and violated
invariants raise :class:`ConfigError` carrying the key and line number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import AccessPoint, UserTerminal

PROFILES = ("table1", "paper-adjusted")
FORMULA_MODES = ("literal", "corrected")

_NEAR = ((1.5, 2.5, 0.85), (2.0, 2.5, 0.85), (2.5, 2.5, 0.85), (3.0, 2.5, 0.85), (3.5, 2.5, 0.85))
_FAR = ((2.5, 3.0, 0.85), (3.0, 3.0, 0.85), (3.5, 3.0, 0.85), (4.0, 3.0, 0.85), (4.5, 3.0, 0.85))


class ConfigError(ValueError):
    """Configuration problem, pinned to a key and (when known) a line."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        loc = ""
        if key is not None:
            loc += f" (key {key!r}"
            loc += f", line {line})" if line is not None else ")"
        elif line is not None:
            loc += f" (line {line})"
        super().__init__(message + loc)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, validated description of one evaluation scenario."""

    profile: str = "table1"
    room: tuple[float, float, float] = (5.0, 5.0, 3.0)
    cell_size: float = 3.6  # informational; no expression consumes it
    ap: AccessPoint = field(
        default_factory=lambda: AccessPoint((2.5, 2.5, 3.0), 60.0, 1.0)
    )
    users: tuple[UserTerminal, ...] = ()
    n0: float = 1e-21
    bandwidth: float = 2e7
    delta_over_b: float = 0.5
    f: int = 3
    v_max: int = 2
    tau: int = 4
    alpha_start: float = 0.05
    alpha_stop: float = 0.95
    alpha_steps: int = 19
    trials: int = 10_000
    seed: int = 12345
    formula_mode: str = "corrected"
    mc_payload_len: int = 8
    i_dc: float = 2.0  # defaults scale as 2 sqrt(P_t) and 4 sqrt(P_t)
    a_max: float = 4.0

    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_start, self.alpha_stop, self.alpha_steps)

    def validate(self) -> "ScenarioConfig":
        def bad(msg, key):
            raise ConfigError(msg, key=key)

        if self.profile not in PROFILES:
            bad(f"profile must be one of {PROFILES}", "profile")
        if self.formula_mode not in FORMULA_MODES:
            bad(f"formula_mode must be one of {FORMULA_MODES}", "formula_mode")
        if any(v <= 0 for v in self.room):
            bad("room dimensions must be positive", "room")
        for name in ("cell_size", "n0", "bandwidth", "delta_over_b", "i_dc", "a_max"):
            if getattr(self, name) <= 0:
                bad(f"{name} must be positive", name)
        for name in ("f", "v_max", "tau", "alpha_steps", "mc_payload_len"):
            if getattr(self, name) < 1:
                bad(f"{name} must be >= 1", name)
        if self.trials < 0:
            bad("trials must be >= 0 (0 disables Monte-Carlo columns)", "trials")
        if self.seed < 0:
            bad("seed must be a non-negative 64-bit integer", "seed")
        if not 0.0 < self.alpha_start <= self.alpha_stop < 1.0:
            bad("alpha grid must satisfy 0 < start <= stop < 1", "alpha_start")
        if not self.users:
            bad("at least one user is required", "user.1.pos")
        seen = set()
        for u in self.users:
            if u.id in seen:
                bad(f"duplicate user id {u.id}", f"user.{u.id}")
            seen.add(u.id)
            if u.group not in (1, 2):
                bad(f"user {u.id} group must be 1 or 2", f"user.{u.id}.group")
            if u.position[2] >= self.ap.position[2]:
                bad(f"user {u.id} must sit below the AP plane", f"user.{u.id}.pos")
        return self


def default_users(fov: float, pd_area: float = 1e-4, responsivity: float = 0.4,
                  mu: float = 1.0) -> tuple[UserTerminal, ...]:
    """The ten table-1 receivers: u1..u5 near (group 1), u6..u10 far (group 2)."""
    users = []
    for i, pos in enumerate(_NEAR + _FAR, start=1):
        users.append(
            UserTerminal(
                id=f"u{i}",
                position=pos,
                fov=fov,
                pd_area=pd_area,
                responsivity=responsivity,
                mu=mu,
                group=1 if i <= 5 else 2,
            )
        )
    return tuple(users)


def profile_defaults(profile: str) -> ScenarioConfig:
    """Built-in defaults; paper-adjusted only widens the field of view to 60°."""
    if profile not in PROFILES:
        raise ConfigError(f"profile must be one of {PROFILES}", key="profile")
    fov = 35.0 if profile == "table1" else 60.0
    return ScenarioConfig(profile=profile, users=default_users(fov))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_GLOBAL_KEYS = {
    "profile", "room", "cell_size", "ap.pos", "ap.semi_angle", "ap.power",
    "fov", "pd_area", "responsivity", "mu", "n0", "bandwidth", "delta_over_b",
    "f", "v_max", "tau", "alpha_start", "alpha_stop", "alpha_steps", "trials",
    "seed", "formula_mode", "mc_payload_len", "i_dc", "a_max",
}
_USER_KEY = re.compile(r"^user\.(\d+)\.(pos|group|fov|pd_area|responsivity|mu)$")


def _parse_float(value: str, key: str, line: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}", key=key, line=line)
    if not math.isfinite(x):
        raise ConfigError("value must be finite", key=key, line=line)
    return x


def _parse_int(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}", key=key, line=line)


def _parse_triple(value: str, key: str, line: int) -> tuple[float, float, float]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 3:
        raise ConfigError("expected three comma-separated numbers", key=key, line=line)
    return tuple(_parse_float(p, key, line) for p in parts)  # type: ignore[return-value]


def parse_entries(text: str) -> list[tuple[str, str, int]]:
    """Split config text into (key, value, line) entries with diagnostics."""
    entries = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=lineno)
        if key in seen:
            raise ConfigError(
                f"duplicate key (first seen on line {seen[key]})", key=key, line=lineno
            )
        if key not in _GLOBAL_KEYS and not _USER_KEY.match(key):
            raise ConfigError("unknown key", key=key, line=lineno)
        seen[key] = lineno
        entries.append((key, value, lineno))
    return entries


def _range_check(key: str, value: float, line: int):
    if key in ("fov", "user_fov") and not 0.0 < value <= 90.0:
        raise ConfigError(f"fov must be in (0, 90] degrees, got {value:g}", key=key, line=line)
    if key == "ap.semi_angle" and not 0.0 < value < 90.0:
        raise ConfigError("semi-angle must be in (0, 90) degrees", key=key, line=line)


def build_config(text: str, flag_overrides: dict[str, str] | None = None) -> ScenarioConfig:
    """Assemble a ScenarioConfig from config text plus CLI-style overrides.

    Missing keys fall back to the selected profile's defaults; flags
    override file values (they are applied last, reported as line 0).
    """
    entries = parse_entries(text)
    if flag_overrides:
        entries = [(k, v, e) for (k, v, e) in entries if k not in flag_overrides]
        entries += [(k, v, 0) for k, v in flag_overrides.items()]

    by_key = {k: (v, line) for k, v, line in entries}

    profile = by_key.get("profile", (None, 0))[0] or "table1"
    if profile not in PROFILES:
        raise ConfigError(
            f"profile must be one of {PROFILES}", key="profile",
            line=by_key.get("profile", ("", 0))[1],
        )
    cfg = profile_defaults(profile)

    # globals feeding user construction
    fov = cfg.users[0].fov
    pd_area, responsivity, mu = 1e-4, 0.4, 1.0
    scalar_float = {
        "cell_size", "n0", "bandwidth", "delta_over_b", "alpha_start",
        "alpha_stop", "i_dc", "a_max",
    }
    scalar_int = {"f", "v_max", "tau", "alpha_steps", "trials", "seed", "mc_payload_len"}
    updates: dict[str, object] = {}
    ap_pos, ap_angle, ap_power = cfg.ap.position, cfg.ap.semi_angle_half_power, cfg.ap.max_optical_power

    user_raw: dict[int, dict[str, tuple[str, int]]] = {}
    for key, value, line in entries:
        m = _USER_KEY.match(key)
        if m:
            user_raw.setdefault(int(m.group(1)), {})[m.group(2)] = (value, line)
            continue
        if key == "profile":
            continue
        if key == "room":
            updates["room"] = _parse_triple(value, key, line)
        elif key == "ap.pos":
            ap_pos = _parse_triple(value, key, line)
        elif key == "ap.semi_angle":
            ap_angle = _parse_float(value, key, line)
            _range_check(key, ap_angle, line)
        elif key == "ap.power":
            ap_power = _parse_float(value, key, line)
        elif key == "fov":
            fov = _parse_float(value, key, line)
            _range_check(key, fov, line)
        elif key == "pd_area":
            pd_area = _parse_float(value, key, line)
        elif key == "responsivity":
            responsivity = _parse_float(value, key, line)
        elif key == "mu":
            mu = _parse_float(value, key, line)
        elif key == "formula_mode":
            if value not in FORMULA_MODES:
                raise ConfigError(
                    f"formula_mode must be one of {FORMULA_MODES}", key=key, line=line
                )
            updates["formula_mode"] = value
        elif key in scalar_float:
            updates[key] = _parse_float(value, key, line)
        elif key in scalar_int:
            updates[key] = _parse_int(value, key, line)

    try:
        ap = AccessPoint(ap_pos, ap_angle, ap_power)
    except ValueError as exc:
        raise ConfigError(str(exc), key="ap.semi_angle") from exc

    # DC bias and intensity ceiling default to 2 sqrt(P_t) and 4 sqrt(P_t),
    # leaving headroom for the largest split sum sqrt(P1) + sqrt(P2) <= sqrt(2 P_t)
    if "i_dc" not in by_key:
        updates["i_dc"] = 2.0 * math.sqrt(ap_power)
    if "a_max" not in by_key:
        updates["a_max"] = 4.0 * math.sqrt(ap_power)

    if user_raw:
        users = []
        for n in sorted(user_raw):
            raw = user_raw[n]
            if "pos" not in raw:
                raise ConfigError("user is missing a position", key=f"user.{n}.pos")
            pos = _parse_triple(raw["pos"][0], f"user.{n}.pos", raw["pos"][1])
            if "group" not in raw:
                raise ConfigError("user is missing a group", key=f"user.{n}.group")
            group = _parse_int(raw["group"][0], f"user.{n}.group", raw["group"][1])
            ufov = fov
            if "fov" in raw:
                ufov = _parse_float(raw["fov"][0], f"user.{n}.fov", raw["fov"][1])
                _range_check("user_fov", ufov, raw["fov"][1])
            kwargs = dict(pd_area=pd_area, responsivity=responsivity, mu=mu)
            for name in ("pd_area", "responsivity", "mu"):
                if name in raw:
                    kwargs[name] = _parse_float(
                        raw[name][0], f"user.{n}.{name}", raw[name][1]
                    )
            try:
                users.append(
                    UserTerminal(id=f"u{n}", position=pos, fov=ufov, group=group, **kwargs)
                )
            except ValueError as exc:
                raise ConfigError(str(exc), key=f"user.{n}.pos") from exc
    else:
        users = list(default_users(fov, pd_area, responsivity, mu))

    cfg = replace(cfg, ap=ap, users=tuple(users), **updates)
    return cfg.validate()


def load_config(path: str | None, flag_overrides: dict[str, str] | None = None) -> ScenarioConfig:
    """Load a config file (or pure defaults when path is None)."""
    text = ""
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    return build_config(text, flag_overrides)


def dump_config(cfg: ScenarioConfig) -> str:
    """Canonical echo of a config; re-parsing it reproduces the scenario."""
    fmt = lambda x: f"{x:.10g}"
    lines = [
        f"profile = {cfg.profile}",
        f"room = {fmt(cfg.room[0])},{fmt(cfg.room[1])},{fmt(cfg.room[2])}",
        f"cell_size = {fmt(cfg.cell_size)}",
        f"ap.pos = {fmt(cfg.ap.position[0])},{fmt(cfg.ap.position[1])},{fmt(cfg.ap.position[2])}",
        f"ap.semi_angle = {fmt(cfg.ap.semi_angle_half_power)}",
        f"ap.power = {fmt(cfg.ap.max_optical_power)}",
        f"n0 = {fmt(cfg.n0)}",
        f"bandwidth = {fmt(cfg.bandwidth)}",
        f"delta_over_b = {fmt(cfg.delta_over_b)}",
        f"f = {cfg.f}",
        f"v_max = {cfg.v_max}",
        f"tau = {cfg.tau}",
        f"alpha_start = {fmt(cfg.alpha_start)}",
        f"alpha_stop = {fmt(cfg.alpha_stop)}",
        f"alpha_steps = {cfg.alpha_steps}",
        f"trials = {cfg.trials}",
        f"seed = {cfg.seed}",
        f"formula_mode = {cfg.formula_mode}",
        f"mc_payload_len = {cfg.mc_payload_len}",
        f"i_dc = {fmt(cfg.i_dc)}",
        f"a_max = {fmt(cfg.a_max)}",
    ]
    for u in cfg.users:
        n = u.id.lstrip("u")
        lines.append(f"user.{n}.pos = {fmt(u.position[0])},{fmt(u.position[1])},{fmt(u.position[2])}")
        lines.append(f"user.{n}.group = {u.group}")
        lines.append(f"user.{n}.fov = {fmt(u.fov)}")
        lines.append(f"user.{n}.pd_area = {fmt(u.pd_area)}")
        lines.append(f"user.{n}.responsivity = {fmt(u.responsivity)}")
        lines.append(f"user.{n}.mu = {fmt(u.mu)}")
    return "\n".join(lines) + "\n"
