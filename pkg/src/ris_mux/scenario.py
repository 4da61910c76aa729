"""Scenario configuration: defaults, validation, sweeps, and the flat key=value format.

Power-like quantities cross this boundary in dBm and are converted to watts
exactly once, when the scenario object is built.  An empty scenario file
reproduces the baseline setup: a 100-element surface at 0.1 m wavelength,
23 dBm transmitters, -90 dBm noise, and the default sampling region.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from .geometry import PathLossParams, RisGeometry, UeRegion, far_field_distance
from .metrics import FrameConfig, LinkBudget, RateTargets, dbm_to_watts
from .reflection import ProjectionSettings
from .schemes import SchemeKind

__all__ = [
    "Scenario",
    "SweepSpec",
    "SWEEP_PARAMETERS",
    "ALL_SCHEMES",
    "parse_scenario",
    "parse_scenario_text",
    "scenario_from_pairs",
    "parse_override",
    "apply_sweep_value",
]

ALL_SCHEMES = (
    SchemeKind.PHASOR_ROTATION,
    SchemeKind.INTERFERENCE_NULLING,
    SchemeKind.RANDOM_PHASES,
    SchemeKind.MISSED_PREAMBLE,
    SchemeKind.PREEMPTIVE_PUNCTURING,
    SchemeKind.GENIE_URLLC,
)

SWEEP_PARAMETERS = (
    "rate_target_urllc",
    "power_ratio_db",
    "miss_detection_rate",
    "num_elements",
    "p_embb_dbm",
)


@dataclass
class SweepSpec:
    """One swept parameter and its value grid."""

    parameter: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(
                f"sweep_parameter: unknown value {self.parameter!r}; "
                f"expected one of {', '.join(SWEEP_PARAMETERS)}"
            )
        self.values = tuple(float(v) for v in self.values)
        if not self.values:
            raise ValueError("sweep_values: must be nonempty")


@dataclass
class Scenario:
    """Complete experiment description; field names double as file keys."""

    num_elements: int = 100
    wavelength_m: float = 0.1
    pathloss_exponent: float = 3.67
    reference_gain: float = 1.0
    reference_distance_m: float = 1.0
    noise_dbm: float = -90.0
    p_embb_dbm: float = 23.0
    p_urllc_dbm: float = 23.0
    region_radius_min_m: float | None = None  # None resolves to the far-field distance
    bs_distance_m: float | None = None  # None tracks the surface's own far-field distance
    region_radius_max_m: float = 100.0
    region_azimuth_min_rad: float = 1.5 * math.pi
    region_azimuth_max_rad: float = 2.0 * math.pi
    region_z_min_m: float = -3.0
    region_z_max_m: float = 3.0
    minislots_total: int = 100
    minislots_urllc: int = 2
    minislots_preamble: int = 1
    minislots_switching: int = 1
    minislot_duration_s: float = 1.25e-4
    bandwidth_hz: float = 1e6
    symbols_per_minislot: int = 1
    processing_delay_s: float = 0.0
    rate_target_embb: float = 20.0
    rate_target_urllc: float = 4.0
    miss_detection_rate: float = 0.0
    urllc_occurred: bool = True
    schemes: tuple[SchemeKind, ...] = ALL_SCHEMES
    trials: int = 100_000
    seed: int = 1234
    workers: int = 1
    nulling_tolerance: float = 1e-6
    nulling_max_iterations: int = 1000
    embb_fixed_radius_m: float | None = None
    # linear-unit powers, derived once here and used everywhere downstream
    p_embb_w: float = field(init=False, repr=False)
    p_urllc_w: float = field(init=False, repr=False)
    noise_w: float = field(init=False, repr=False)

    def __post_init__(self):
        self.schemes = tuple(self.schemes)
        self.p_embb_w = dbm_to_watts(self.p_embb_dbm)
        self.p_urllc_w = dbm_to_watts(self.p_urllc_dbm)
        self.noise_w = dbm_to_watts(self.noise_dbm)

    # component builders; each re-validates its own invariants

    def geometry(self) -> RisGeometry:
        return RisGeometry(self.num_elements, self.wavelength_m)

    def pathloss(self) -> PathLossParams:
        return PathLossParams(self.reference_gain, self.reference_distance_m, self.pathloss_exponent)

    def far_field(self) -> float:
        return far_field_distance(self.num_elements, self.wavelength_m)

    def resolved_radius_min(self) -> float:
        if self.region_radius_min_m is None:
            return self.far_field()
        return self.region_radius_min_m

    def resolved_bs_distance(self) -> float:
        if self.bs_distance_m is None:
            return self.far_field()
        return self.bs_distance_m

    def region(self) -> UeRegion:
        return UeRegion(
            radius_min=self.resolved_radius_min(),
            radius_max=self.region_radius_max_m,
            azimuth_min=self.region_azimuth_min_rad,
            azimuth_max=self.region_azimuth_max_rad,
            z_min=self.region_z_min_m,
            z_max=self.region_z_max_m,
        )

    def budget(self) -> LinkBudget:
        return LinkBudget(self.p_embb_w, self.p_urllc_w, self.noise_w)

    def frame(self) -> FrameConfig:
        return FrameConfig(
            minislots_total=self.minislots_total,
            minislots_urllc=self.minislots_urllc,
            minislots_preamble=self.minislots_preamble,
            minislots_switching=self.minislots_switching,
            minislot_duration_s=self.minislot_duration_s,
            bandwidth_hz=self.bandwidth_hz,
            symbols_per_minislot=self.symbols_per_minislot,
            processing_delay_s=self.processing_delay_s,
        )

    def targets(self) -> RateTargets:
        return RateTargets(embb=self.rate_target_embb, urllc=self.rate_target_urllc)

    def nulling_settings(self) -> ProjectionSettings:
        return ProjectionSettings(self.nulling_tolerance, self.nulling_max_iterations)

    def validate(self):
        """Reject physically or numerically inconsistent configurations.

        Raises ValueError whose message starts with the offending key.
        """
        self.geometry()
        self.pathloss()
        self.budget()
        self.frame()
        self.targets()
        self.nulling_settings()
        region = self.region()
        if region.radius_min < self.far_field() - 1e-12:
            raise ValueError(
                f"region_radius_min_m: {region.radius_min} is inside the far-field "
                f"distance {self.far_field()}"
            )
        if self.bs_distance_m is not None and self.bs_distance_m < self.far_field() - 1e-12:
            raise ValueError(
                f"bs_distance_m: {self.bs_distance_m} is inside the far-field "
                f"distance {self.far_field()}"
            )
        if self.embb_fixed_radius_m is not None:
            if self.embb_fixed_radius_m < self.far_field():
                raise ValueError("embb_fixed_radius_m: inside the far-field distance")
            if self.embb_fixed_radius_m <= max(abs(self.region_z_min_m), abs(self.region_z_max_m)):
                raise ValueError("embb_fixed_radius_m: not larger than the height bounds")
        if not 0.0 <= self.miss_detection_rate <= 1.0:
            raise ValueError("miss_detection_rate: must lie in [0, 1]")
        if self.far_field() <= 0:
            raise ValueError(
                "num_elements: far-field distance is zero, so the base-station "
                "placement is degenerate (need num_elements >= 4)"
            )
        if not self.schemes:
            raise ValueError("schemes: at least one scheme is required")
        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("schemes: duplicate scheme names")
        for s in self.schemes:
            if not isinstance(s, SchemeKind):
                raise ValueError(f"schemes: {s!r} is not a known scheme")
        if self.trials < 1:
            raise ValueError("trials: must be >= 1")
        if self.workers < 1:
            raise ValueError("workers: must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed: must fit in an unsigned 64-bit integer")

    def to_mapping(self) -> dict:
        """Resolved configuration as plain JSON-friendly values, keyed like the file."""
        out = {}
        for f in dataclasses.fields(self):
            if not f.init:
                continue
            value = getattr(self, f.name)
            if f.name == "schemes":
                value = ",".join(s.value for s in value)
            elif f.name == "region_radius_min_m":
                value = self.resolved_radius_min()
            elif f.name == "bs_distance_m":
                value = self.resolved_bs_distance()
            out[f.name] = value
        return out


def apply_sweep_value(scenario: Scenario, parameter: str, value: float) -> Scenario:
    """Return a copy of the scenario with one grid point applied."""
    if parameter == "rate_target_urllc":
        return dataclasses.replace(scenario, rate_target_urllc=float(value))
    if parameter == "power_ratio_db":
        # the swept quantity is p_embb/p_urllc in dB with p_urllc held fixed
        return dataclasses.replace(scenario, p_embb_dbm=scenario.p_urllc_dbm + float(value))
    if parameter == "miss_detection_rate":
        return dataclasses.replace(scenario, miss_detection_rate=float(value))
    if parameter == "num_elements":
        n = int(round(float(value)))
        return dataclasses.replace(scenario, num_elements=n)
    if parameter == "p_embb_dbm":
        return dataclasses.replace(scenario, p_embb_dbm=float(value))
    raise ValueError(f"sweep_parameter: unknown value {parameter!r}")


# ---------------------------------------------------------------------------
# flat key=value scenario files

def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")

def _parse_int(raw: str) -> int:
    return int(raw.strip())

def _parse_float(raw: str) -> float:
    return float(raw.strip())

def _parse_radius_or_auto(raw: str) -> float | None:
    if raw.strip().lower() == "auto":
        return None
    return float(raw)

def _parse_radius_or_none(raw: str) -> float | None:
    if raw.strip().lower() == "none":
        return None
    return float(raw)

def _parse_schemes(raw: str) -> tuple[SchemeKind, ...]:
    names = [part.strip() for part in raw.split(",") if part.strip()]
    if not names:
        raise ValueError("expected a comma-separated list of scheme names")
    by_value = {s.value: s for s in SchemeKind}
    out = []
    for name in names:
        if name not in by_value:
            raise ValueError(
                f"unknown scheme {name!r}; expected names among {', '.join(by_value)}"
            )
        out.append(by_value[name])
    return tuple(out)

def _parse_float_list(raw: str) -> tuple[float, ...]:
    parts = [part.strip() for part in raw.split(",") if part.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(float(p) for p in parts)

def _parse_sweep_name(raw: str) -> str | None:
    name = raw.strip()
    if name.lower() == "none":
        return None
    return name


_KEY_PARSERS = {
    "num_elements": _parse_int,
    "wavelength_m": _parse_float,
    "pathloss_exponent": _parse_float,
    "reference_gain": _parse_float,
    "reference_distance_m": _parse_float,
    "noise_dbm": _parse_float,
    "p_embb_dbm": _parse_float,
    "p_urllc_dbm": _parse_float,
    "region_radius_min_m": _parse_radius_or_auto,
    "bs_distance_m": _parse_radius_or_auto,
    "region_radius_max_m": _parse_float,
    "region_azimuth_min_rad": _parse_float,
    "region_azimuth_max_rad": _parse_float,
    "region_z_min_m": _parse_float,
    "region_z_max_m": _parse_float,
    "minislots_total": _parse_int,
    "minislots_urllc": _parse_int,
    "minislots_preamble": _parse_int,
    "minislots_switching": _parse_int,
    "minislot_duration_s": _parse_float,
    "bandwidth_hz": _parse_float,
    "symbols_per_minislot": _parse_int,
    "processing_delay_s": _parse_float,
    "rate_target_embb": _parse_float,
    "rate_target_urllc": _parse_float,
    "miss_detection_rate": _parse_float,
    "urllc_occurred": _parse_bool,
    "schemes": _parse_schemes,
    "trials": _parse_int,
    "seed": _parse_int,
    "workers": _parse_int,
    "nulling_tolerance": _parse_float,
    "nulling_max_iterations": _parse_int,
    "embb_fixed_radius_m": _parse_radius_or_none,
    "sweep_parameter": _parse_sweep_name,
    "sweep_values": _parse_float_list,
}


def parse_override(item: str) -> tuple[str, str]:
    """Split one 'key=value' override string."""
    if "=" not in item:
        raise ValueError(f"override {item!r}: expected key=value")
    key, _, raw = item.partition("=")
    return key.strip(), raw.strip()


def scenario_from_pairs(pairs: dict[str, str]) -> tuple[Scenario, SweepSpec | None]:
    """Build a scenario (and optional sweep) from raw string key/value pairs."""
    converted = {}
    for key, raw in pairs.items():
        parser = _KEY_PARSERS.get(key)
        if parser is None:
            raise ValueError(f"{key}: unknown scenario key")
        try:
            converted[key] = parser(raw)
        except ValueError as exc:
            raise ValueError(f"{key}: {exc}") from None
    sweep_parameter = converted.pop("sweep_parameter", None)
    sweep_values = converted.pop("sweep_values", None)
    scenario = Scenario(**converted)
    if sweep_parameter is None:
        if sweep_values is not None:
            raise ValueError("sweep_values: given without sweep_parameter")
        return scenario, None
    if sweep_values is None:
        raise ValueError("sweep_values: required when sweep_parameter is set")
    return scenario, SweepSpec(sweep_parameter, sweep_values)


def parse_scenario_text(text: str) -> dict[str, str]:
    """Split a flat key=value document (# starts a comment line) into raw pairs."""
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected key = value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key in pairs:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = raw.strip()
    return pairs


def parse_scenario(text: str) -> tuple[Scenario, SweepSpec | None]:
    """Parse the flat key=value scenario document into a scenario and sweep."""
    return scenario_from_pairs(parse_scenario_text(text))
