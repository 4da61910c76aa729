"""Reflection-coefficient design: coherent beamforming, antiphase amplitude
splitting, alternating-projection interference nulling, and random phases.

Every routine returns phases; the unit-modulus coefficients exp(-j*theta) are
derived from them, so the modulus constraint holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RisConfiguration",
    "PartitionResult",
    "ProjectionSettings",
    "ProjectionOutcome",
    "coherent_beamformer",
    "phasor_rotation",
    "brute_force_partition",
    "interference_nulling",
    "hyperplane_project",
    "random_configuration",
]

TWO_PI = 2.0 * np.pi

BRUTE_FORCE_LIMIT = 24  # 2^N table; beyond this the memory/time blowup is refused


@dataclass
class RisConfiguration:
    """Unit-modulus reflection pattern, stored as phases in [0, 2*pi).

    num_zero_entries counts channel entries whose phase was undefined
    (zero magnitude); those elements are parked at phase 0.
    """

    phases: np.ndarray
    num_zero_entries: int = 0

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float)

    @property
    def num_elements(self) -> int:
        return self.phases.size

    @property
    def coefficients(self) -> np.ndarray:
        return np.exp(-1j * self.phases)


@dataclass
class PartitionResult:
    """Split of the element indices into two antiphase groups.

    residual is the leftover amplitude |sum(A[set_zero]) - sum(A[set_pi])|
    with A the cascaded-channel magnitudes; it equals the effective channel
    magnitude the antiphase pattern leaves behind.
    """

    set_zero: np.ndarray
    set_pi: np.ndarray
    split_size: int
    residual: float


@dataclass
class ProjectionSettings:
    """Stopping rule and starting point for the alternating projections."""

    tolerance: float = 1e-6
    max_iterations: int = 1000
    initial: RisConfiguration | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("nulling_tolerance: must be positive")
        if self.max_iterations < 1:
            raise ValueError("nulling_max_iterations: must be >= 1")


@dataclass
class ProjectionOutcome:
    """Result of the alternating-projection run.

    residual is recomputed from the returned configuration's coefficients,
    so downstream consumers squaring it reproduce the interference power
    bit for bit.  converged implies residual <= tolerance * ||g||_2.
    """

    configuration: RisConfiguration
    residual: float
    iterations: int
    converged: bool
    zero_fallbacks: int = 0


def coherent_beamformer(g: np.ndarray) -> RisConfiguration:
    """Phase-align every reflected path: theta_n = -angle(g_n), wrapped to [0, 2*pi).

    The effective channel g^H psi then equals sum |g_n|, the largest value any
    unit-modulus pattern can reach.  Zero-magnitude entries have no defined
    phase; they are set to 0 and counted.
    """
    g = np.asarray(g, dtype=complex)
    zero = g == 0
    theta = np.mod(-np.angle(g), TWO_PI)
    theta[zero] = 0.0
    return RisConfiguration(theta, num_zero_entries=int(np.count_nonzero(zero)))


def phasor_rotation(g_e: np.ndarray) -> tuple[RisConfiguration, PartitionResult]:
    """Antiphase amplitude split that minimizes the prefix-balanced residual.

    The cascaded magnitudes are sorted ascending (stable); among the splits
    "N' shortest vs the rest" for N' in 1..N, the one minimizing the absolute
    sum imbalance wins, ties going to the smallest N'.  Elements in the short
    group reflect with phase -angle(g_n); the rest get an extra pi so the two
    groups cancel.
    """
    g = np.asarray(g_e, dtype=complex)
    if g.size < 1:
        raise ValueError("channel vector is empty")
    amps = np.abs(g)
    order = np.argsort(amps, kind="stable")
    prefix = np.cumsum(amps[order])
    total = prefix[-1]
    imbalance = np.abs(2.0 * prefix - total)
    split = int(np.argmin(imbalance)) + 1  # argmin returns the first (smallest) minimizer
    set_zero = order[:split]
    set_pi = order[split:]
    theta = np.mod(-np.angle(g), TWO_PI)
    theta[set_pi] = np.mod(np.pi - np.angle(g[set_pi]), TWO_PI)
    theta[amps == 0.0] = 0.0  # undefined phase contributes nothing either way
    result = PartitionResult(
        set_zero=np.sort(set_zero),
        set_pi=np.sort(set_pi),
        split_size=split,
        residual=float(imbalance[split - 1]),
    )
    return RisConfiguration(theta), result


def brute_force_partition(g_e: np.ndarray) -> PartitionResult:
    """Globally optimal antiphase split by exhaustive enumeration.

    Builds all 2^N subset sums with the doubling construction (bit i of the
    subset mask toggles element i into the zero-phase group) and picks the
    minimum-imbalance mask, ties going to the lowest mask.  Refused above
    BRUTE_FORCE_LIMIT elements.
    """
    g = np.asarray(g_e, dtype=complex)
    n = g.size
    if n < 1:
        raise ValueError("channel vector is empty")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force split refused for N={n} > {BRUTE_FORCE_LIMIT}")
    amps = np.abs(g)
    total = amps.sum()
    sums = np.zeros(1 << n)
    size = 1
    for a in amps:
        sums[size : 2 * size] = sums[:size] + a
        size *= 2
    sums *= 2.0
    sums -= total
    np.abs(sums, out=sums)
    best = int(np.argmin(sums))
    members = (best >> np.arange(n)) & 1 == 1
    return PartitionResult(
        set_zero=np.flatnonzero(members),
        set_pi=np.flatnonzero(~members),
        split_size=int(np.count_nonzero(members)),
        residual=float(sums[best]),
    )


def hyperplane_project(g: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Exact orthogonal projection of psi onto the subspace {x : g^H x = 0}."""
    g = np.asarray(g, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    norm_sq = np.vdot(g, g).real
    if norm_sq == 0.0:
        raise ValueError("cannot project onto the null set of a zero vector")
    return psi - np.vdot(g, psi) * (g / norm_sq)


def interference_nulling(g_e: np.ndarray, settings: ProjectionSettings) -> ProjectionOutcome:
    """Alternate between the nulling hyperplane and the unit-modulus set.

    Each pass projects the iterate exactly onto {psi : g_e^H psi = 0} and then
    renormalizes every entry to unit modulus.  Entries that land exactly on
    zero keep their previous phase (counted in zero_fallbacks).  The run stops
    once |g_e^H psi| <= tolerance * ||g_e||_2 holds for the coefficients
    rebuilt from the stored phases, or at max_iterations; non-convergence is
    reported in the outcome, never raised.
    """
    g = np.asarray(g_e, dtype=complex)
    norm = float(np.linalg.norm(g))
    if norm == 0.0:
        raise ValueError("cannot null a zero channel")
    if settings.initial is not None:
        psi = settings.initial.coefficients
        if psi.size != g.size:
            raise ValueError("initial configuration length mismatch")
    else:
        psi = np.ones(g.size, dtype=complex)
    threshold = settings.tolerance * norm
    direction = g / (norm * norm)  # premultiplied so the loop projection stays exact
    zero_fallbacks = 0
    iterations = 0
    converged = False
    theta = None
    residual = None
    for iterations in range(1, settings.max_iterations + 1):
        projected = psi - np.vdot(g, psi) * direction
        mags = np.abs(projected)
        dead = mags == 0.0
        if np.any(dead):
            zero_fallbacks += int(np.count_nonzero(dead))
            projected[dead] = psi[dead]
            mags[dead] = np.abs(psi[dead])
        psi = projected / mags
        if abs(np.vdot(g, psi)) <= threshold:
            # round-trip through stored phases: the reported residual must
            # describe the configuration actually returned
            theta = np.mod(-np.angle(psi), TWO_PI)
            coeffs = np.exp(-1j * theta)
            residual = abs(np.vdot(g, coeffs))
            if residual <= threshold:
                converged = True
                break
    if not converged:
        theta = np.mod(-np.angle(psi), TWO_PI)
        residual = abs(np.vdot(g, np.exp(-1j * theta)))
    return ProjectionOutcome(
        configuration=RisConfiguration(theta),
        residual=float(residual),
        iterations=iterations,
        converged=converged,
        zero_fallbacks=zero_fallbacks,
    )


def random_configuration(num_elements: int, rng: np.random.Generator) -> RisConfiguration:
    """Independent uniform phases over [0, 2*pi)."""
    if num_elements < 1:
        raise ValueError("num_elements: must be >= 1")
    return RisConfiguration(TWO_PI * rng.random(num_elements))
