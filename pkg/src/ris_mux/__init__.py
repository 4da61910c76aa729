"""Link-level Monte-Carlo simulator for surface-assisted uplink multiplexing
of wideband (eMBB) and low-latency (URLLC) traffic.

The package is organized bottom-up: geometry and channels, reflection-pattern
algorithms, link metrics, per-trial scheme semantics, the seeded Monte-Carlo
engine, and a CLI that writes CSV tables with metadata and figures.
"""

__version__ = "0.1.0"

from .channel import ChannelRealization, cascaded_channel, los_channel
from .geometry import (
    PathLossParams,
    RisGeometry,
    UeRegion,
    bs_position,
    element_positions,
    far_field_distance,
    sample_ue_position,
)
from .metrics import (
    FrameConfig,
    LinkBudget,
    RateTargets,
    dbm_to_watts,
    effective_gain,
    embb_mutual_info,
    embb_snr,
    outage,
    urllc_latency,
    urllc_mutual_info,
    urllc_sinr,
    xi_fraction,
)
from .montecarlo import (
    Estimate,
    SchemeEstimates,
    TrialStreams,
    collect_trials,
    estimate_mean,
    estimate_proportion,
    run_scenario,
    run_sweep,
)
from .reflection import (
    PartitionResult,
    ProjectionOutcome,
    ProjectionSettings,
    RisConfiguration,
    brute_force_partition,
    coherent_beamformer,
    hyperplane_project,
    interference_nulling,
    phasor_rotation,
    random_configuration,
)
from .scenario import (
    ALL_SCHEMES,
    Scenario,
    SweepSpec,
    apply_sweep_value,
    parse_scenario,
    scenario_from_pairs,
)
from .schemes import SchemeKind, TrialOutcome, apply_detection, evaluate_trial, urllc_policy

__all__ = [
    "__version__",
    "ChannelRealization",
    "cascaded_channel",
    "los_channel",
    "PathLossParams",
    "RisGeometry",
    "UeRegion",
    "bs_position",
    "element_positions",
    "far_field_distance",
    "sample_ue_position",
    "FrameConfig",
    "LinkBudget",
    "RateTargets",
    "dbm_to_watts",
    "effective_gain",
    "embb_mutual_info",
    "embb_snr",
    "outage",
    "urllc_latency",
    "urllc_mutual_info",
    "urllc_sinr",
    "xi_fraction",
    "Estimate",
    "SchemeEstimates",
    "TrialStreams",
    "collect_trials",
    "estimate_mean",
    "estimate_proportion",
    "run_scenario",
    "run_sweep",
    "PartitionResult",
    "ProjectionOutcome",
    "ProjectionSettings",
    "RisConfiguration",
    "brute_force_partition",
    "coherent_beamformer",
    "hyperplane_project",
    "interference_nulling",
    "phasor_rotation",
    "random_configuration",
    "ALL_SCHEMES",
    "Scenario",
    "SweepSpec",
    "apply_sweep_value",
    "parse_scenario",
    "scenario_from_pairs",
    "SchemeKind",
    "TrialOutcome",
    "apply_detection",
    "evaluate_trial",
    "urllc_policy",
]
