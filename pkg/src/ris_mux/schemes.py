"""Per-trial semantics of the eMBB/URLLC multiplexing schemes.

Each scheme answers two questions for the low-latency TTI: which reflection
pattern serves it, and whether the wideband transmission stays active (and
therefore interferes).  A shared Bernoulli detection draw decides whether the
surface reacted to the arrival at all; on a miss every scheme collapses to
the always-miss baseline.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .metrics import (
    FrameConfig,
    LinkBudget,
    RateTargets,
    effective_gain,
    embb_mutual_info,
    outage,
)
from .reflection import (
    ProjectionSettings,
    RisConfiguration,
    coherent_beamformer,
    interference_nulling,
    phasor_rotation,
    random_configuration,
)

__all__ = ["SchemeKind", "TrialOutcome", "apply_detection", "urllc_policy", "evaluate_trial"]


class SchemeKind(enum.Enum):
    """URLLC-TTI policies, named by what the surface does during the TTI."""

    PHASOR_ROTATION = "phasor_rotation"
    INTERFERENCE_NULLING = "interference_nulling"
    RANDOM_PHASES = "random"
    MISSED_PREAMBLE = "missed_preamble"
    PREEMPTIVE_PUNCTURING = "preemptive_puncturing"
    GENIE_URLLC = "genie_urllc"


@dataclass
class TrialOutcome:
    """Everything one trial produced for one scheme."""

    mi_embb: float
    mi_urllc: float
    sinr_urllc: float
    outage_embb: bool
    outage_urllc: bool
    detection_hit: bool
    in_residual: float | None = None
    in_iterations: int | None = None
    in_converged: bool | None = None
    in_zero_fallbacks: int | None = None
    pr_split_size: int | None = None
    pr_residual: float | None = None


def apply_detection(scheme: SchemeKind, miss_rate: float, uniform_draw: float) -> bool:
    """Shared Bernoulli(1 - miss_rate) detection outcome.

    All schemes in a trial consume the same uniform draw, so detection is a
    paired event across schemes.  The always-miss baseline ignores the draw.
    """
    if not 0.0 <= miss_rate <= 1.0:
        raise ValueError("miss_detection_rate: must lie in [0, 1]")
    if scheme is SchemeKind.MISSED_PREAMBLE:
        return False
    return uniform_draw < 1.0 - miss_rate


def urllc_policy(
    scheme: SchemeKind,
    channels: ChannelRealization,
    rng: np.random.Generator | None,
    *,
    psi_embb: RisConfiguration,
    nulling: ProjectionSettings | None = None,
) -> tuple[RisConfiguration, bool, dict]:
    """Resolve (pattern, wideband-active flag, diagnostics) for a detected arrival.

    rng feeds only the randomized policies (nulling start point, random
    phases).  Non-convergence of the nulling projection is reported through
    the diagnostics, never raised.
    """
    if scheme is SchemeKind.MISSED_PREAMBLE:
        return psi_embb, True, {}
    if scheme is SchemeKind.PREEMPTIVE_PUNCTURING:
        # pattern untouched, wideband stream interrupted for the TTI
        return psi_embb, False, {}
    if scheme is SchemeKind.GENIE_URLLC:
        # upper bound: perfect alignment on the low-latency user, no interference
        return coherent_beamformer(channels.g_urllc), False, {}
    if scheme is SchemeKind.RANDOM_PHASES:
        return random_configuration(channels.g_embb.size, rng), True, {}
    if scheme is SchemeKind.PHASOR_ROTATION:
        config, part = phasor_rotation(channels.g_embb)
        return config, True, {"pr_split_size": part.split_size, "pr_residual": part.residual}
    if scheme is SchemeKind.INTERFERENCE_NULLING:
        settings = nulling if nulling is not None else ProjectionSettings()
        settings = ProjectionSettings(
            tolerance=settings.tolerance,
            max_iterations=settings.max_iterations,
            initial=random_configuration(channels.g_embb.size, rng),
        )
        result = interference_nulling(channels.g_embb, settings)
        diag = {
            "in_residual": result.residual,
            "in_iterations": result.iterations,
            "in_converged": result.converged,
            "in_zero_fallbacks": result.zero_fallbacks,
        }
        return result.configuration, True, diag
    raise ValueError(f"unknown scheme: {scheme!r}")


def evaluate_trial(
    scheme: SchemeKind,
    channels: ChannelRealization,
    budget: LinkBudget,
    frame: FrameConfig,
    targets: RateTargets,
    miss_rate: float,
    *,
    detection_uniform: float,
    policy_rng: np.random.Generator | None = None,
    psi_embb: RisConfiguration | None = None,
    urllc_occurred: bool = True,
    nulling: ProjectionSettings | None = None,
) -> TrialOutcome:
    """Evaluate one scheme on one channel realization.

    The wideband metrics depend only on the channels and the frame, never on
    the scheme, so paired comparisons across schemes isolate the TTI policy.
    detection_uniform is the trial's shared detection draw.
    """
    if psi_embb is None:
        psi_embb = coherent_beamformer(channels.g_embb)
    mi_e = embb_mutual_info(channels.g_embb, budget, frame, urllc_occurred)
    hit = apply_detection(scheme, miss_rate, detection_uniform)
    if hit:
        psi_tti, embb_active, diag = urllc_policy(
            scheme, channels, policy_rng, psi_embb=psi_embb, nulling=nulling
        )
    else:
        psi_tti, embb_active, diag = psi_embb, True, {}
    coeffs = psi_tti.coefficients
    interference = budget.p_embb_w * effective_gain(channels.g_embb, coeffs) if embb_active else 0.0
    sinr = budget.p_urllc_w * effective_gain(channels.g_urllc, coeffs) / (interference + budget.noise_w)
    mi_u = math.log2(1.0 + sinr)
    return TrialOutcome(
        mi_embb=mi_e,
        mi_urllc=mi_u,
        sinr_urllc=sinr,
        outage_embb=outage(mi_e, targets.embb),
        outage_urllc=outage(mi_u, targets.urllc),
        detection_hit=hit,
        **diag,
    )
