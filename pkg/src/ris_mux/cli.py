"""Command-line front end: scenario execution with CSV, metadata, and figure reports."""

from __future__ import annotations

import argparse
import datetime
import sys
import time
from pathlib import Path

from . import __version__
from .metrics import xi_fraction
from .montecarlo import run_scenario, run_sweep
from .presets import PRESET_NAMES, get_preset
from .results import rows_from_estimates, write_csv, write_metadata
from .scenario import (
    SweepSpec,
    parse_override,
    parse_scenario_text,
    scenario_from_pairs,
)

__all__ = ["main", "build_parser"]

# overlaid on the measured curve in the spectral-efficiency preset
_SE_OVERHEAD_FAMILY = (0.05, 0.2, 0.5, 0.8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-mux",
        description=(
            "Link-level Monte-Carlo simulator for surface-assisted uplink "
            "multiplexing of wideband and low-latency traffic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a scenario or preset; write CSV, metadata, and figure")
    run_p.add_argument("scenario", nargs="?", help="path of a flat key=value scenario file")
    run_p.add_argument("--preset", choices=PRESET_NAMES, help="named experiment preset")
    run_p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    run_p.add_argument("--trials", type=int, help="trials per grid point")
    run_p.add_argument("--workers", type=int, help="worker processes")
    run_p.add_argument("--out", help="CSV output path; metadata/figure land beside it")
    run_p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any scenario key (repeatable)",
    )
    return parser


def _raw_cell(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _preset_pairs(name: str) -> tuple[dict[str, str], str]:
    preset = get_preset(name)
    pairs = {key: _raw_cell(value) for key, value in preset.scenario.to_mapping().items()}
    pairs["sweep_parameter"] = preset.sweep.parameter
    pairs["sweep_values"] = ",".join(repr(v) for v in preset.sweep.values)
    return pairs, preset.name


def _load_pairs(args) -> tuple[dict[str, str], str]:
    """Resolve the base configuration pairs and a default output stem."""
    if args.preset and args.scenario:
        raise ValueError("scenario: give either a scenario file or --preset, not both")
    if args.preset:
        return _preset_pairs(args.preset)
    if args.scenario:
        path = Path(args.scenario)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValueError(f"scenario: cannot read {path}: {exc}") from None
        return parse_scenario_text(text), path.stem
    raise ValueError("scenario: a scenario file or --preset is required")


def _run(args) -> int:
    pairs, stem = _load_pairs(args)
    for item in args.overrides:
        key, raw = parse_override(item)
        pairs[key] = raw
    if args.seed is not None:
        pairs["seed"] = str(args.seed)
    if args.trials is not None:
        pairs["trials"] = str(args.trials)
    if args.workers is not None:
        pairs["workers"] = str(args.workers)
    scenario, sweep = scenario_from_pairs(pairs)
    scenario.validate()

    out_csv = Path(args.out) if args.out else Path(f"{stem}.csv")
    out_meta = out_csv.with_suffix(".meta.json")
    out_fig = out_csv.with_suffix(".png")

    started = time.perf_counter()
    if sweep is not None:
        rows = []
        for value, estimates in run_sweep(sweep, scenario):
            rows.extend(rows_from_estimates(sweep.parameter, value, scenario.seed, estimates))
    else:
        estimates = run_scenario(scenario)
        rows = rows_from_estimates("none", None, scenario.seed, estimates)
    wall_time = time.perf_counter() - started

    warnings = []
    for row in rows:
        if row.metric.endswith("outage") and row.estimate == 0.0:
            point = "" if row.sweep_value is None else f" at {row.sweep_param}={row.sweep_value:g}"
            warnings.append(
                f"{row.scheme}{point}: no {row.metric} events in {row.n} trials; "
                "the floor is below this trial budget's resolution"
            )

    write_csv(rows, out_csv)
    is_se_preset = args.preset is not None and args.preset == "fig-e"
    from .plots import render_results  # deferred: pulls in matplotlib

    render_results(
        rows,
        out_fig,
        title=stem,
        xi_current=xi_fraction(scenario.frame()) if is_se_preset else None,
        xi_family=_SE_OVERHEAD_FAMILY if is_se_preset else (),
    )
    metadata = {
        "tool": "ris-mux",
        "version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "wall_time_s": wall_time,
        "scenario": scenario.to_mapping(),
        "sweep": None if sweep is None else {"parameter": sweep.parameter, "values": list(sweep.values)},
        "far_field_distance_m": scenario.far_field(),
        "outputs": {"csv": str(out_csv), "figure": str(out_fig)},
        "warnings": warnings,
    }
    write_metadata(metadata, out_meta)

    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(f"wrote {out_csv} ({len(rows)} rows), {out_meta}, {out_fig}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
