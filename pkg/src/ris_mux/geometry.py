"""Deployment geometry: surface layout, base station, and random node placement."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RisGeometry",
    "UeRegion",
    "PathLossParams",
    "element_positions",
    "far_field_distance",
    "bs_position",
    "sample_ue_position",
]


def far_field_distance(num_elements: int, wavelength: float) -> float:
    """Minimum radial distance for sampled nodes: wavelength * (sqrt(N) - 1)^2 / 2."""
    if num_elements < 1:
        raise ValueError("num_elements: must be >= 1")
    if wavelength <= 0:
        raise ValueError("wavelength_m: must be positive")
    return wavelength * (math.sqrt(num_elements) - 1.0) ** 2 / 2.0


def element_positions(num_elements: int, wavelength: float) -> np.ndarray:
    """Half-wavelength square grid in the yz-plane, centered on the origin.

    Returns an (N, 3) array of xyz coordinates in meters.  Ordering is
    row-major: index n = i*k + j with y = offsets[i] varying slowest and
    z = offsets[j] fastest.
    """
    k = math.isqrt(num_elements)
    if k * k != num_elements:
        raise ValueError("num_elements: must be a perfect square")
    if wavelength <= 0:
        raise ValueError("wavelength_m: must be positive")
    offsets = (np.arange(k) - (k - 1) / 2.0) * (wavelength / 2.0)
    yy, zz = np.meshgrid(offsets, offsets, indexing="ij")
    positions = np.zeros((num_elements, 3))
    positions[:, 1] = yy.ravel()
    positions[:, 2] = zz.ravel()
    return positions


def bs_position(far_field: float) -> np.ndarray:
    """Base station location on the x=y diagonal at the far-field radius, z = 0."""
    if far_field <= 0:
        raise ValueError("far_field: must be positive")
    c = far_field / math.sqrt(2.0)
    return np.array([c, c, 0.0])


@dataclass
class RisGeometry:
    """Square uniform planar array of passive reflecting elements.

    The surface lies in the yz-plane with its centroid at the origin and
    element pitch of half a wavelength.  One element (the center, or the
    element nearest the origin when the side length is even) hosts the
    detection hardware; its index is exposed as ``active_index``.
    """

    num_elements: int
    wavelength: float
    positions: np.ndarray = field(init=False, repr=False)
    active_index: int = field(init=False)

    def __post_init__(self):
        self.positions = element_positions(self.num_elements, self.wavelength)
        sq = np.einsum("ij,ij->i", self.positions, self.positions)
        self.active_index = int(np.argmin(sq))  # first occurrence = lowest row-major index

    @property
    def spacing(self) -> float:
        return self.wavelength / 2.0

    @property
    def far_field(self) -> float:
        return far_field_distance(self.num_elements, self.wavelength)


@dataclass
class PathLossParams:
    """Distance-power law: gain = reference_gain * (reference_distance / d)^exponent."""

    reference_gain: float = 1.0
    reference_distance: float = 1.0
    exponent: float = 3.67

    def __post_init__(self):
        if self.reference_gain <= 0:
            raise ValueError("reference_gain: must be positive")
        if self.reference_distance <= 0:
            raise ValueError("reference_distance_m: must be positive")
        if self.exponent <= 0:
            raise ValueError("pathloss_exponent: must be positive")


@dataclass
class UeRegion:
    """Spherical-coordinate sampling region for user placements.

    Radial distance in [radius_min, radius_max] meters, azimuth in
    [azimuth_min, azimuth_max] radians (from +x toward +y), and height
    z in [z_min, z_max] meters.  The polar angle is constrained per draw
    so that z = radius * cos(polar) stays inside the height bounds, which
    requires |z| bounds strictly below radius_min.
    """

    radius_min: float
    radius_max: float = 100.0
    azimuth_min: float = 1.5 * math.pi
    azimuth_max: float = 2.0 * math.pi
    z_min: float = -3.0
    z_max: float = 3.0

    def __post_init__(self):
        if self.radius_min <= 0:
            raise ValueError("region_radius_min_m: must be positive")
        if self.radius_max < self.radius_min:
            raise ValueError("region_radius_max_m: bounds out of order")
        if self.azimuth_max < self.azimuth_min:
            raise ValueError("region_azimuth_max_rad: bounds out of order")
        if self.z_max < self.z_min:
            raise ValueError("region_z_max_m: bounds out of order")
        if max(abs(self.z_min), abs(self.z_max)) >= self.radius_min:
            raise ValueError(
                "region_z_min_m/region_z_max_m: height bounds must be smaller "
                "than the minimum radius or the polar-angle interval is empty"
            )


def sample_ue_position(
    region: UeRegion,
    rng: np.random.Generator,
    *,
    count: int | None = None,
    radius_override: float | None = None,
) -> np.ndarray:
    """Draw node positions uniformly in each spherical coordinate.

    Radius, polar angle, and azimuth are each uniform over their admissible
    interval; the polar bounds are recomputed per draw from the drawn radius
    so that the height constraint holds.  Exactly three uniforms per node are
    consumed regardless of ``radius_override`` (the radial draw is discarded
    when the radius is pinned), so placement streams stay aligned across
    scenario variants.

    Returns shape (3,) for ``count=None``, else (count, 3).
    """
    size = 1 if count is None else count
    radius = region.radius_min + (region.radius_max - region.radius_min) * rng.random(size)
    if radius_override is not None:
        if radius_override < max(abs(region.z_min), abs(region.z_max)):
            raise ValueError("embb_fixed_radius_m: smaller than the height bounds")
        radius = np.full(size, float(radius_override))
    azimuth = region.azimuth_min + (region.azimuth_max - region.azimuth_min) * rng.random(size)
    # arccos is decreasing: the z_max bound gives the smaller polar angle
    polar_lo = np.arccos(region.z_max / radius)
    polar_hi = np.arccos(region.z_min / radius)
    polar = polar_lo + (polar_hi - polar_lo) * rng.random(size)
    sin_p = np.sin(polar)
    xyz = np.empty((size, 3))
    xyz[:, 0] = radius * sin_p * np.cos(azimuth)
    xyz[:, 1] = radius * sin_p * np.sin(azimuth)
    xyz[:, 2] = radius * np.cos(polar)
    return xyz[0] if count is None else xyz
