"""Seeded Monte-Carlo engine: trial substreams, batch estimation, and sweeps.

Randomness contract: every trial derives its generators from
(master seed, trial index, purpose), so estimates do not depend on execution
order, worker count, or which schemes run.  Trials are processed in fixed
chunks of CHUNK_TRIALS and chunk partials are reduced in chunk order, which
makes floating-point accumulation byte-identical regardless of parallelism.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization, los_channel
from .geometry import bs_position, sample_ue_position
from .reflection import coherent_beamformer
from .scenario import Scenario, SweepSpec, apply_sweep_value
from .schemes import SchemeKind, TrialOutcome, evaluate_trial

__all__ = [
    "CHUNK_TRIALS",
    "Estimate",
    "SchemeDiagnostics",
    "SchemeEstimates",
    "TrialRecord",
    "TrialStreams",
    "estimate_proportion",
    "estimate_mean",
    "run_scenario",
    "run_sweep",
    "collect_trials",
]

CHUNK_TRIALS = 2048  # fixed so the reduction tree never depends on worker count

# substream purposes; the numbers are part of the reproducibility contract
PURPOSE_PLACEMENT = 0
PURPOSE_DETECTION = 1
PURPOSE_NULLING_INIT = 2
PURPOSE_RANDOM_PHASES = 3

Z_95 = 1.96  # two-sided 95% normal quantile used by both interval estimators


class TrialStreams:
    """Per-trial random generators, one per purpose, built lazily."""

    __slots__ = ("master_seed", "trial_index", "_generators", "_detection_uniform")

    def __init__(self, master_seed: int, trial_index: int):
        self.master_seed = master_seed
        self.trial_index = trial_index
        self._generators: dict[int, np.random.Generator] = {}
        self._detection_uniform: float | None = None

    def generator(self, purpose: int) -> np.random.Generator:
        gen = self._generators.get(purpose)
        if gen is None:
            seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.trial_index, purpose))
            gen = np.random.default_rng(seq)
            self._generators[purpose] = gen
        return gen

    def detection_uniform(self) -> float:
        """The trial's single shared detection draw (cached across schemes)."""
        if self._detection_uniform is None:
            self._detection_uniform = float(self.generator(PURPOSE_DETECTION).random())
        return self._detection_uniform


@dataclass
class Estimate:
    """Point estimate with a 95% confidence interval."""

    value: float
    ci_low: float
    ci_high: float
    n: int


@dataclass
class SchemeDiagnostics:
    """Aggregate algorithm health for one scheme over a batch."""

    detection_hit_rate: float
    in_convergence_rate: float | None = None
    in_mean_iterations: float | None = None
    in_zero_fallback_rate: float | None = None
    pr_mean_residual: float | None = None


@dataclass
class SchemeEstimates:
    scheme: SchemeKind
    urllc_outage: Estimate
    embb_outage: Estimate
    embb_se: Estimate
    diagnostics: SchemeDiagnostics


@dataclass
class TrialRecord:
    """Single-trial detail row returned by collect_trials."""

    index: int
    embb_position: np.ndarray
    urllc_position: np.ndarray
    outcomes: dict[SchemeKind, TrialOutcome]


def estimate_proportion(successes: int, n: int) -> Estimate:
    """Wilson 95% interval for a binomial proportion."""
    if n < 1:
        raise ValueError("trials: need at least one trial to estimate a proportion")
    if not 0 <= successes <= n:
        raise ValueError("successes out of range")
    p = successes / n
    z2 = Z_95 * Z_95
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = Z_95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    return Estimate(value=p, ci_low=max(0.0, center - half), ci_high=min(1.0, center + half), n=n)


def estimate_mean(total: float, total_sq: float, n: int) -> Estimate:
    """Normal-approximation 95% interval for a sample mean from running sums."""
    if n < 1:
        raise ValueError("trials: need at least one trial to estimate a mean")
    mean = total / n
    if n > 1:
        variance = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        half = Z_95 * math.sqrt(variance / n)
    else:
        half = 0.0
    return Estimate(value=mean, ci_low=mean - half, ci_high=mean + half, n=n)


@dataclass
class _SchemeTally:
    """Order-independent running sums for one scheme."""

    trials: int = 0
    urllc_outages: int = 0
    embb_outages: int = 0
    se_sum: float = 0.0
    se_sumsq: float = 0.0
    hits: int = 0
    in_trials: int = 0
    in_converged: int = 0
    in_iterations_sum: int = 0
    in_zero_fallbacks: int = 0
    pr_trials: int = 0
    pr_residual_sum: float = 0.0

    def add(self, outcome: TrialOutcome):
        self.trials += 1
        self.urllc_outages += outcome.outage_urllc
        self.embb_outages += outcome.outage_embb
        self.se_sum += outcome.mi_embb
        self.se_sumsq += outcome.mi_embb * outcome.mi_embb
        self.hits += outcome.detection_hit
        if outcome.in_iterations is not None:
            self.in_trials += 1
            self.in_converged += outcome.in_converged
            self.in_iterations_sum += outcome.in_iterations
            self.in_zero_fallbacks += outcome.in_zero_fallbacks
        if outcome.pr_residual is not None:
            self.pr_trials += 1
            self.pr_residual_sum += outcome.pr_residual

    def merge(self, other: "_SchemeTally"):
        self.trials += other.trials
        self.urllc_outages += other.urllc_outages
        self.embb_outages += other.embb_outages
        self.se_sum += other.se_sum
        self.se_sumsq += other.se_sumsq
        self.hits += other.hits
        self.in_trials += other.in_trials
        self.in_converged += other.in_converged
        self.in_iterations_sum += other.in_iterations_sum
        self.in_zero_fallbacks += other.in_zero_fallbacks
        self.pr_trials += other.pr_trials
        self.pr_residual_sum += other.pr_residual_sum


@dataclass
class _RunContext:
    """Per-process immutable state shared by all trials of a run."""

    scenario: Scenario
    geometry: object
    pathloss: object
    region: object
    budget: object
    frame: object
    targets: object
    nulling: object
    h_bs: np.ndarray = field(repr=False)


def _build_context(scenario: Scenario) -> _RunContext:
    geometry = scenario.geometry()
    pathloss = scenario.pathloss()
    h_bs = los_channel(bs_position(scenario.resolved_bs_distance()), geometry, pathloss)
    return _RunContext(
        scenario=scenario,
        geometry=geometry,
        pathloss=pathloss,
        region=scenario.region(),
        budget=scenario.budget(),
        frame=scenario.frame(),
        targets=scenario.targets(),
        nulling=scenario.nulling_settings(),
        h_bs=h_bs,
    )


def synthesize_trial(ctx: _RunContext, streams: TrialStreams):
    """Draw both placements and build the trial's channel realization.

    Placement order is fixed (wideband user first) so streams stay aligned
    across scheme sets and sweep grid points.
    """
    rng = streams.generator(PURPOSE_PLACEMENT)
    embb_pos = sample_ue_position(
        ctx.region, rng, radius_override=ctx.scenario.embb_fixed_radius_m
    )
    urllc_pos = sample_ue_position(ctx.region, rng)
    h_embb = los_channel(embb_pos, ctx.geometry, ctx.pathloss)
    h_urllc = los_channel(urllc_pos, ctx.geometry, ctx.pathloss)
    channels = ChannelRealization.from_links(ctx.h_bs, h_embb, h_urllc)
    return channels, embb_pos, urllc_pos


_POLICY_PURPOSE = {
    SchemeKind.INTERFERENCE_NULLING: PURPOSE_NULLING_INIT,
    SchemeKind.RANDOM_PHASES: PURPOSE_RANDOM_PHASES,
}


def _evaluate_schemes(ctx: _RunContext, streams: TrialStreams, channels: ChannelRealization):
    scenario = ctx.scenario
    psi_embb = coherent_beamformer(channels.g_embb)
    detection_uniform = streams.detection_uniform()
    outcomes = {}
    for scheme in scenario.schemes:
        purpose = _POLICY_PURPOSE.get(scheme)
        policy_rng = streams.generator(purpose) if purpose is not None else None
        outcomes[scheme] = evaluate_trial(
            scheme,
            channels,
            ctx.budget,
            ctx.frame,
            ctx.targets,
            scenario.miss_detection_rate,
            detection_uniform=detection_uniform,
            policy_rng=policy_rng,
            psi_embb=psi_embb,
            urllc_occurred=scenario.urllc_occurred,
            nulling=ctx.nulling,
        )
    return outcomes


def _run_chunk(scenario: Scenario, start: int, count: int) -> dict[SchemeKind, _SchemeTally]:
    ctx = _build_context(scenario)
    tallies = {scheme: _SchemeTally() for scheme in scenario.schemes}
    for index in range(start, start + count):
        streams = TrialStreams(scenario.seed, index)
        channels, _, _ = synthesize_trial(ctx, streams)
        for scheme, outcome in _evaluate_schemes(ctx, streams, channels).items():
            tallies[scheme].add(outcome)
    return tallies


def _chunk_spans(trials: int):
    return [(start, min(CHUNK_TRIALS, trials - start)) for start in range(0, trials, CHUNK_TRIALS)]


def _finalize(scheme: SchemeKind, tally: _SchemeTally) -> SchemeEstimates:
    diagnostics = SchemeDiagnostics(detection_hit_rate=tally.hits / tally.trials)
    if tally.in_trials:
        diagnostics.in_convergence_rate = tally.in_converged / tally.in_trials
        diagnostics.in_mean_iterations = tally.in_iterations_sum / tally.in_trials
        diagnostics.in_zero_fallback_rate = tally.in_zero_fallbacks / tally.in_trials
    if tally.pr_trials:
        diagnostics.pr_mean_residual = tally.pr_residual_sum / tally.pr_trials
    return SchemeEstimates(
        scheme=scheme,
        urllc_outage=estimate_proportion(tally.urllc_outages, tally.trials),
        embb_outage=estimate_proportion(tally.embb_outages, tally.trials),
        embb_se=estimate_mean(tally.se_sum, tally.se_sumsq, tally.trials),
        diagnostics=diagnostics,
    )


def run_scenario(scenario: Scenario) -> dict[SchemeKind, SchemeEstimates]:
    """Run all trials of one scenario and estimate every scheme's metrics.

    The result is bit-identical for identical (scenario, seed) regardless of
    the worker count: chunks are deterministic and their partial sums are
    merged in chunk order.
    """
    scenario.validate()
    spans = _chunk_spans(scenario.trials)
    if scenario.workers == 1 or len(spans) == 1:
        partials = (_run_chunk(scenario, start, count) for start, count in spans)
        totals = {scheme: _SchemeTally() for scheme in scenario.schemes}
        for partial in partials:
            for scheme, tally in partial.items():
                totals[scheme].merge(tally)
    else:
        args = [(scenario, start, count) for start, count in spans]
        ctx = multiprocessing.get_context("spawn")
        with ctx.Pool(processes=scenario.workers) as pool:
            ordered = pool.starmap(_run_chunk, args, chunksize=1)
        totals = {scheme: _SchemeTally() for scheme in scenario.schemes}
        for partial in ordered:
            for scheme, tally in partial.items():
                totals[scheme].merge(tally)
    return {scheme: _finalize(scheme, tally) for scheme, tally in totals.items()}


def run_sweep(spec: SweepSpec, base: Scenario) -> list[tuple[float, dict[SchemeKind, SchemeEstimates]]]:
    """Run one scenario per grid point with common random numbers.

    The master seed is shared across grid points, so placement draws coincide
    wherever the sampling region does; curve comparisons across the sweep are
    then paired rather than independent.
    """
    results = []
    for value in spec.values:
        point = apply_sweep_value(base, spec.parameter, value)
        results.append((value, run_scenario(point)))
    return results


def collect_trials(scenario: Scenario, limit: int | None = None) -> list[TrialRecord]:
    """Single-process debug/verification path: full per-trial outcomes.

    Identical trial-level results to run_scenario (same streams, same math),
    but keeps every record, so use small trial counts.
    """
    scenario.validate()
    trials = scenario.trials if limit is None else min(limit, scenario.trials)
    ctx = _build_context(scenario)
    records = []
    for index in range(trials):
        streams = TrialStreams(scenario.seed, index)
        channels, embb_pos, urllc_pos = synthesize_trial(ctx, streams)
        outcomes = _evaluate_schemes(ctx, streams, channels)
        records.append(TrialRecord(index, embb_pos, urllc_pos, outcomes))
    return records
