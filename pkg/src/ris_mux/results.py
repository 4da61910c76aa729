"""Long-format results table: CSV emission and the metadata sidecar."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .montecarlo import SchemeEstimates
from .schemes import SchemeKind

__all__ = ["CSV_COLUMNS", "ResultRow", "rows_from_estimates", "write_csv", "write_metadata"]

CSV_COLUMNS = (
    "sweep_param",
    "sweep_value",
    "scheme",
    "metric",
    "estimate",
    "ci_low",
    "ci_high",
    "n",
    "seed",
    "detection_hit_rate",
    "in_convergence_rate",
    "in_mean_iterations",
    "pr_mean_residual",
)

_METRICS = ("urllc_outage", "embb_outage", "embb_se")


@dataclass
class ResultRow:
    """One (grid point, scheme, metric) estimate."""

    sweep_param: str
    sweep_value: float | None
    scheme: str
    metric: str
    estimate: float
    ci_low: float
    ci_high: float
    n: int
    seed: int
    detection_hit_rate: float
    in_convergence_rate: float | None
    in_mean_iterations: float | None
    pr_mean_residual: float | None


def rows_from_estimates(
    sweep_param: str,
    sweep_value: float | None,
    seed: int,
    estimates: dict[SchemeKind, SchemeEstimates],
) -> list[ResultRow]:
    """Flatten one grid point's estimates into long-format rows.

    Row order follows the scenario's scheme order, then the fixed metric
    order, so identical runs serialize identically.
    """
    rows = []
    for scheme, est in estimates.items():
        per_metric = {
            "urllc_outage": est.urllc_outage,
            "embb_outage": est.embb_outage,
            "embb_se": est.embb_se,
        }
        diag = est.diagnostics
        for metric in _METRICS:
            e = per_metric[metric]
            rows.append(
                ResultRow(
                    sweep_param=sweep_param,
                    sweep_value=sweep_value,
                    scheme=scheme.value,
                    metric=metric,
                    estimate=e.value,
                    ci_low=e.ci_low,
                    ci_high=e.ci_high,
                    n=e.n,
                    seed=seed,
                    detection_hit_rate=diag.detection_hit_rate,
                    in_convergence_rate=diag.in_convergence_rate,
                    in_mean_iterations=diag.in_mean_iterations,
                    pr_mean_residual=diag.pr_mean_residual,
                )
            )
    return rows


def _cell(value) -> str:
    # repr of a float is shortest-roundtrip, so full precision survives
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[ResultRow], path: str | Path) -> Path:
    """Write the long-format table; byte-identical for identical rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_cell(getattr(row, column)) for column in CSV_COLUMNS])
    return path


def write_metadata(payload: dict, path: str | Path) -> Path:
    """Write the JSON sidecar describing exactly how the CSV was produced."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path
