"""Network-coded NOMA over an indoor optical wireless downlink.

A small numpy-based toolkit with four layers:

* :mod:`~owc_rlnc_noma.gf256` / :mod:`~owc_rlnc_noma.rlnc` — GF(2^8)
  arithmetic and the random linear network codec (encoder, online
  Gauss-Jordan decoder, batched trial kernel).
* :mod:`~owc_rlnc_noma.channel` / :mod:`~owc_rlnc_noma.noma` — Lambertian
  line-of-sight geometry, power allocation and achievable rates.
* :mod:`~owc_rlnc_noma.outage` — closed-form per-packet failure and total
  frame success probabilities for NOMA, OMA and their coded variants.
* :mod:`~owc_rlnc_noma.montecarlo` / :mod:`~owc_rlnc_noma.sweep` — the
  seeded packet-level simulator that cross-checks the closed forms, and
  the alpha-sweep/CSV runner behind the ``owc-rlnc-noma`` command.
"""

from .channel import AccessPoint, ChannelGain, NoiseModel, UserTerminal, lambert_index, los_gain, noise_variance
from .config import ConfigError, ScenarioConfig, build_config, dump_config, load_config, profile_defaults
from .gf256 import full_rank_probability, gf_add, gf_inv, gf_mul
from .montecarlo import EstimateResult, TrialConfig, compare, simulate_plain, simulate_rlnc
from .noma import (
    NomaOrderingWarning,
    PowerAllocation,
    RateReport,
    SuperpositionConstraint,
    allocate_power,
    assign_groups,
    rate_noma_strong,
    rate_noma_weak,
    rate_oma,
    sum_rates,
    validate_superposition,
)
from .outage import (
    CaptureConfig,
    OutageParams,
    SuccessReport,
    attempt_failure,
    channel_gain_demand,
    epsilon_for,
    outage_threshold,
    packet_failure,
    scheme_success_report,
    success_noma,
    success_rlnc,
    success_rlnc_decode_aware,
)
from .rlnc import CodedPacket, DecoderState, Generation, InsufficientRankError, decode_batch, encode
from .sweep import SweepResult, emit_csv, run_sweep

__version__ = "0.1.0"
