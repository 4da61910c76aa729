"""Link metrics: gains, SNR/SINR, per-mini-slot mutual information, outage, latency."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .reflection import RisConfiguration

__all__ = [
    "LinkBudget",
    "FrameConfig",
    "RateTargets",
    "dbm_to_watts",
    "effective_gain",
    "embb_snr",
    "urllc_sinr",
    "xi_fraction",
    "coherent_embb_snr",
    "embb_mutual_info",
    "urllc_mutual_info",
    "outage",
    "urllc_latency",
]


def dbm_to_watts(dbm: float) -> float:
    """10^((dBm - 30)/10); applied exactly once at the configuration boundary."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass
class LinkBudget:
    """Transmit and noise powers in watts (linear units throughout the hot path)."""

    p_embb_w: float
    p_urllc_w: float
    noise_w: float

    def __post_init__(self):
        if self.p_embb_w <= 0:
            raise ValueError("p_embb_dbm: power must be positive")
        if self.p_urllc_w <= 0:
            raise ValueError("p_urllc_dbm: power must be positive")
        if self.noise_w <= 0:
            raise ValueError("noise_dbm: noise power must be positive")


@dataclass
class FrameConfig:
    """Mini-slot frame layout and timing.

    A frame holds minislots_total identical mini-slots; a low-latency arrival
    consumes minislots_preamble for detection, minislots_switching to change
    the surface pattern before and again after its TTI, and minislots_urllc
    of payload.  symbols_per_minislot is carried for completeness and unused
    by the rate metrics.
    """

    minislots_total: int = 100
    minislots_urllc: int = 2
    minislots_preamble: int = 1
    minislots_switching: int = 1
    minislot_duration_s: float = 1.25e-4
    bandwidth_hz: float = 1e6
    symbols_per_minislot: int = 1
    processing_delay_s: float = 0.0

    def __post_init__(self):
        for name in ("minislots_total", "minislots_urllc", "minislots_preamble", "minislots_switching"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name}: must be >= 1")
        if self.minislots_urllc > self.minislots_total:
            raise ValueError("minislots_urllc: exceeds minislots_total")
        erased = self.minislots_preamble + 2 * self.minislots_switching + self.minislots_urllc
        if erased > self.minislots_total:
            raise ValueError("minislots_total: too small for preamble + 2*switching + TTI")
        if self.minislot_duration_s <= 0:
            raise ValueError("minislot_duration_s: must be positive")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz: must be positive")
        if self.symbols_per_minislot < 1:
            raise ValueError("symbols_per_minislot: must be >= 1")
        if self.processing_delay_s < 0:
            raise ValueError("processing_delay_s: must be nonnegative")


@dataclass
class RateTargets:
    """Target spectral efficiencies per mini-slot, bits/s/Hz."""

    embb: float
    urllc: float

    def __post_init__(self):
        if self.embb <= 0:
            raise ValueError("rate_target_embb: must be positive")
        if self.urllc <= 0:
            raise ValueError("rate_target_urllc: must be positive")


def _coefficients(psi) -> np.ndarray:
    if isinstance(psi, RisConfiguration):
        return psi.coefficients
    return np.asarray(psi)


def effective_gain(g: np.ndarray, psi) -> float:
    """|g^H psi|^2 for a configuration or a raw coefficient vector.

    Computed as abs(vdot)**2 so that squared algorithm residuals (which are
    abs(vdot) of the same coefficients) match this value bit for bit.
    """
    coeffs = _coefficients(psi)
    g = np.asarray(g)
    if g.shape != coeffs.shape:
        raise ValueError("channel/configuration length mismatch")
    return abs(np.vdot(g, coeffs)) ** 2


def embb_snr(g_e: np.ndarray, psi, budget: LinkBudget) -> float:
    """Received SNR of the wideband stream under an arbitrary pattern."""
    return budget.p_embb_w * effective_gain(g_e, psi) / budget.noise_w


def coherent_embb_snr(g_e: np.ndarray, budget: LinkBudget) -> float:
    """SNR under the phase-aligned pattern: p_e * (sum |g_n|)^2 / noise."""
    amp = float(np.abs(g_e).sum())
    return budget.p_embb_w * amp * amp / budget.noise_w


def urllc_sinr(g_u, g_e, psi, budget: LinkBudget, embb_active: bool) -> float:
    """SINR of the low-latency stream during its TTI.

    embb_active=False models an interrupted wideband transmission (the
    puncturing baseline): the interference term is absent regardless of the
    pattern.
    """
    coeffs = _coefficients(psi)
    interference = budget.p_embb_w * effective_gain(g_e, coeffs) if embb_active else 0.0
    return budget.p_urllc_w * effective_gain(g_u, coeffs) / (interference + budget.noise_w)


def xi_fraction(frame: FrameConfig) -> float:
    """Fraction of the frame erased for the wideband stream by one arrival."""
    erased = frame.minislots_preamble + 2 * frame.minislots_switching + frame.minislots_urllc
    return erased / frame.minislots_total


def embb_mutual_info(g_e, budget: LinkBudget, frame: FrameConfig, urllc_occurred: bool) -> float:
    """Per-mini-slot mutual information of the wideband stream.

    The pattern is the phase-aligned one by construction (the surface serves
    the wideband user outside any TTI).  When an arrival occurred the pre-log
    is reduced by the erased fraction; otherwise the full frame counts.
    """
    xi_eff = xi_fraction(frame) if urllc_occurred else 0.0
    return (1.0 - xi_eff) * math.log2(1.0 + coherent_embb_snr(g_e, budget))


def urllc_mutual_info(g_u, g_e, psi, budget: LinkBudget, embb_active: bool) -> float:
    """Per-mini-slot mutual information of the low-latency stream.

    Constant across the TTI mini-slots under block fading, so the TTI average
    equals the single-slot value.
    """
    return math.log2(1.0 + urllc_sinr(g_u, g_e, psi, budget, embb_active))


def outage(mutual_info: float, target: float) -> bool:
    """Strict comparison: in outage iff the mutual information is below target."""
    return mutual_info < target


def urllc_latency(frame: FrameConfig) -> float:
    """Worst-case arrival-to-delivery time: preamble + switch + TTI slots, plus processing."""
    slots = frame.minislots_preamble + frame.minislots_switching + frame.minislots_urllc
    return slots * frame.minislot_duration_s + frame.processing_delay_s
