"""Scenario parsing and validation, result serialization, presets, rendering."""

import json
import math

import pytest

from ris_mux.montecarlo import Estimate, SchemeDiagnostics, SchemeEstimates
from ris_mux.presets import PRESET_NAMES, get_preset
from ris_mux.results import CSV_COLUMNS, ResultRow, rows_from_estimates, write_csv, write_metadata
from ris_mux.scenario import (
    ALL_SCHEMES,
    Scenario,
    SweepSpec,
    apply_sweep_value,
    parse_override,
    parse_scenario,
)
from ris_mux.schemes import SchemeKind


class TestDefaults:
    def test_baseline_scenario(self):
        s = Scenario()
        s.validate()
        assert s.num_elements == 100
        assert s.far_field() == pytest.approx(4.05, rel=1e-12)
        assert s.resolved_radius_min() == pytest.approx(4.05, rel=1e-12)
        assert s.p_embb_w == pytest.approx(10.0 ** -0.7, rel=1e-15)
        assert s.noise_w == pytest.approx(1e-12, rel=1e-15)
        assert s.schemes == ALL_SCHEMES

    def test_empty_document_is_baseline(self):
        parsed, sweep = parse_scenario("")
        assert parsed == Scenario()
        assert sweep is None


class TestParsing:
    def test_full_document(self):
        text = """
        # basic geometry
        num_elements = 64
        wavelength_m = 0.2

        region_radius_min_m = auto
        schemes = phasor_rotation, genie_urllc
        urllc_occurred = true
        trials = 500
        sweep_parameter = rate_target_urllc
        sweep_values = 1, 2, 4
        """
        scenario, sweep = parse_scenario(text)
        assert scenario.num_elements == 64
        assert scenario.wavelength_m == 0.2
        assert scenario.region_radius_min_m is None
        assert scenario.schemes == (SchemeKind.PHASOR_ROTATION, SchemeKind.GENIE_URLLC)
        assert scenario.trials == 500
        assert sweep == SweepSpec("rate_target_urllc", (1.0, 2.0, 4.0))

    def test_round_trip_through_mapping(self):
        source = Scenario(num_elements=64, rate_target_urllc=2.5, miss_detection_rate=0.01)
        text = "\n".join(f"{key} = {value}" for key, value in source.to_mapping().items())
        parsed, sweep = parse_scenario(text)
        assert sweep is None
        # the mapping resolves the auto radius, so compare resolved forms
        assert parsed.to_mapping() == source.to_mapping()

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="nonsense: unknown scenario key"):
            parse_scenario("nonsense = 5")

    def test_duplicate_key_reports_line(self):
        with pytest.raises(ValueError, match="line 3"):
            parse_scenario("trials = 5\n# fine\ntrials = 6")

    def test_missing_equals_reports_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_scenario("trials = 5\nbroken line")

    def test_bad_value_prefixed_with_key(self):
        with pytest.raises(ValueError, match="^trials:"):
            parse_scenario("trials = many")

    def test_unknown_scheme_name(self):
        with pytest.raises(ValueError, match="unknown scheme"):
            parse_scenario("schemes = phasor_rotation, telepathy")

    def test_fixed_radius_sentinel(self):
        scenario, _ = parse_scenario("embb_fixed_radius_m = none")
        assert scenario.embb_fixed_radius_m is None
        scenario, _ = parse_scenario("embb_fixed_radius_m = 80")
        assert scenario.embb_fixed_radius_m == 80.0

    def test_bs_distance_sentinel(self):
        scenario, _ = parse_scenario("bs_distance_m = auto")
        assert scenario.bs_distance_m is None
        scenario, _ = parse_scenario("bs_distance_m = 18")
        assert scenario.bs_distance_m == 18.0

    def test_sweep_requires_both_keys(self):
        with pytest.raises(ValueError, match="sweep_values"):
            parse_scenario("sweep_parameter = rate_target_urllc")
        with pytest.raises(ValueError, match="sweep_values"):
            parse_scenario("sweep_values = 1,2")

    def test_sweep_parameter_none_disables(self):
        scenario, sweep = parse_scenario("sweep_parameter = none")
        assert sweep is None

    def test_parse_override(self):
        assert parse_override("trials = 50") == ("trials", "50")
        assert parse_override("schemes=random") == ("schemes", "random")
        with pytest.raises(ValueError, match="key=value"):
            parse_override("trials")


class TestValidation:
    def test_rejects_nonpositive_counts(self):
        with pytest.raises(ValueError, match="^trials:"):
            Scenario(trials=0).validate()
        with pytest.raises(ValueError, match="^workers:"):
            Scenario(workers=0).validate()

    def test_rejects_bad_seed(self):
        with pytest.raises(ValueError, match="^seed:"):
            Scenario(seed=-1).validate()
        with pytest.raises(ValueError, match="^seed:"):
            Scenario(seed=2 ** 64).validate()

    def test_rejects_region_inside_far_field(self):
        with pytest.raises(ValueError, match="far-field"):
            Scenario(region_radius_min_m=3.5).validate()

    def test_rejects_degenerate_surface(self):
        with pytest.raises(ValueError, match="num_elements"):
            Scenario(num_elements=1, region_radius_min_m=5.0).validate()

    def test_rejects_bad_miss_rate(self):
        with pytest.raises(ValueError, match="miss_detection_rate"):
            Scenario(miss_detection_rate=1.5).validate()

    def test_rejects_duplicate_schemes(self):
        with pytest.raises(ValueError, match="duplicate"):
            Scenario(schemes=(SchemeKind.RANDOM_PHASES, SchemeKind.RANDOM_PHASES)).validate()

    def test_rejects_empty_schemes(self):
        with pytest.raises(ValueError, match="schemes"):
            Scenario(schemes=()).validate()

    def test_rejects_fixed_radius_inside_far_field(self):
        with pytest.raises(ValueError, match="embb_fixed_radius_m"):
            Scenario(embb_fixed_radius_m=2.0).validate()

    def test_fixed_radius_at_far_field_accepted(self):
        Scenario(embb_fixed_radius_m=4.05).validate()

    def test_bs_distance_resolution_and_bounds(self):
        assert Scenario().resolved_bs_distance() == 4.05
        pinned = Scenario(bs_distance_m=18.0)
        pinned.validate()
        assert pinned.resolved_bs_distance() == 18.0
        assert pinned.to_mapping()["bs_distance_m"] == 18.0
        assert Scenario().to_mapping()["bs_distance_m"] == 4.05
        with pytest.raises(ValueError, match="^bs_distance_m:"):
            Scenario(bs_distance_m=3.5).validate()


class TestSweeps:
    def test_rate_target(self):
        out = apply_sweep_value(Scenario(), "rate_target_urllc", 7.0)
        assert out.rate_target_urllc == 7.0

    def test_power_ratio_holds_urllc_power(self):
        out = apply_sweep_value(Scenario(), "power_ratio_db", -30.0)
        assert out.p_urllc_dbm == 23.0
        assert out.p_embb_dbm == pytest.approx(-7.0)
        # derived watts must track the change
        assert out.p_embb_w == pytest.approx(10.0 ** ((-7.0 - 30.0) / 10.0), rel=1e-15)

    def test_num_elements_is_integer(self):
        out = apply_sweep_value(Scenario(), "num_elements", 196.0)
        assert out.num_elements == 196
        assert isinstance(out.num_elements, int)

    def test_unknown_parameter(self):
        with pytest.raises(ValueError, match="sweep_parameter"):
            apply_sweep_value(Scenario(), "bandwidth_hz", 1.0)
        with pytest.raises(ValueError, match="sweep_parameter"):
            SweepSpec("bandwidth_hz", (1.0,))

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError, match="sweep_values"):
            SweepSpec("rate_target_urllc", ())


def fake_estimates():
    def est(v):
        return Estimate(value=v, ci_low=v - 0.01, ci_high=v + 0.01, n=100)

    return {
        SchemeKind.PHASOR_ROTATION: SchemeEstimates(
            scheme=SchemeKind.PHASOR_ROTATION,
            urllc_outage=est(0.1),
            embb_outage=est(0.2),
            embb_se=est(12.5),
            diagnostics=SchemeDiagnostics(detection_hit_rate=1.0, pr_mean_residual=0.003),
        ),
        SchemeKind.MISSED_PREAMBLE: SchemeEstimates(
            scheme=SchemeKind.MISSED_PREAMBLE,
            urllc_outage=est(0.9),
            embb_outage=est(0.2),
            embb_se=est(12.5),
            diagnostics=SchemeDiagnostics(detection_hit_rate=0.0),
        ),
    }


class TestResults:
    def test_rows_ordering(self):
        rows = rows_from_estimates("rate_target_urllc", 4.0, 1234, fake_estimates())
        assert [r.scheme for r in rows] == ["phasor_rotation"] * 3 + ["missed_preamble"] * 3
        assert [r.metric for r in rows[:3]] == ["urllc_outage", "embb_outage", "embb_se"]
        assert all(r.sweep_value == 4.0 for r in rows)
        assert all(r.seed == 1234 for r in rows)

    def test_csv_layout(self, tmp_path):
        rows = rows_from_estimates("rate_target_urllc", 4.0, 1234, fake_estimates())
        path = write_csv(rows, tmp_path / "out.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 6
        # None diagnostics serialize as empty cells
        first = lines[1].split(",")
        assert first[CSV_COLUMNS.index("in_convergence_rate")] == ""
        assert first[CSV_COLUMNS.index("pr_mean_residual")] == "0.003"

    def test_csv_bytes_stable(self, tmp_path):
        rows = rows_from_estimates("none", None, 7, fake_estimates())
        a = write_csv(rows, tmp_path / "a.csv").read_bytes()
        b = write_csv(rows, tmp_path / "b.csv").read_bytes()
        assert a == b

    def test_float_cells_round_trip(self, tmp_path):
        rows = rows_from_estimates("none", None, 7, fake_estimates())
        path = write_csv(rows, tmp_path / "rt.csv")
        line = path.read_text().splitlines()[1].split(",")
        assert float(line[CSV_COLUMNS.index("estimate")]) == 0.1

    def test_metadata_sidecar(self, tmp_path):
        payload = {"b": 1, "a": {"nested": True}}
        path = write_metadata(payload, tmp_path / "m.meta.json")
        text = path.read_text()
        assert text.endswith("\n")
        assert json.loads(text) == payload
        # keys are sorted for stable diffs
        assert text.index('"a"') < text.index('"b"')


class TestPresets:
    def test_names(self):
        assert PRESET_NAMES == ("fig-a", "fig-b", "fig-c", "fig-d", "fig-e")

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_every_grid_point_is_valid(self, name):
        preset = get_preset(name)
        preset.scenario.validate()
        for value in preset.sweep.values:
            apply_sweep_value(preset.scenario, preset.sweep.parameter, value).validate()

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="preset"):
            get_preset("fig-z")

    def test_fixed_deployment_for_size_sweep(self):
        # both the sampling region and the base station stay put while the
        # surface grows, so the sweep isolates the aperture effect
        preset = get_preset("fig-d")
        assert preset.scenario.region_radius_min_m == 18.0
        assert preset.scenario.bs_distance_m == 18.0
        assert preset.sweep.parameter == "num_elements"

    def test_cell_edge_preset_pins_wideband_user(self):
        preset = get_preset("fig-e")
        assert preset.scenario.embb_fixed_radius_m == 100.0
        assert preset.scenario.schemes == (SchemeKind.MISSED_PREAMBLE,)


class TestRendering:
    def test_outage_panel(self, tmp_path):
        from ris_mux.plots import render_results

        rows = []
        for value in (1.0, 2.0, 4.0):
            rows.extend(rows_from_estimates("rate_target_urllc", value, 1, fake_estimates()))
        out = render_results(rows, tmp_path / "fig.png")
        assert out.exists()
        assert out.stat().st_size > 10_000

    def test_se_panel_with_overhead_family(self, tmp_path):
        from ris_mux.plots import render_results

        estimates = fake_estimates()
        # zero outage everywhere forces the spectral-efficiency panel
        for scheme_est in estimates.values():
            scheme_est.urllc_outage = Estimate(0.0, 0.0, 0.01, 100)
        rows = []
        for value in (-10.0, 0.0, 10.0):
            rows.extend(rows_from_estimates("p_embb_dbm", value, 1, estimates))
        out = render_results(
            rows, tmp_path / "se.png", xi_current=0.05, xi_family=(0.05, 0.2, 0.5, 0.8)
        )
        assert out.exists()
        assert out.stat().st_size > 10_000

    def test_single_point_run_renders(self, tmp_path):
        from ris_mux.plots import render_results

        rows = rows_from_estimates("none", None, 1, fake_estimates())
        out = render_results(rows, tmp_path / "point.png", title="single point")
        assert out.exists()
