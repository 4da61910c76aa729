"""Figure rendering for result tables: outage curves and spectral-efficiency panels."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .results import ResultRow

__all__ = ["render_results"]

_SCHEME_LABELS = {
    "phasor_rotation": "phasor rotation",
    "interference_nulling": "interference nulling",
    "random": "random phases",
    "missed_preamble": "missed preamble",
    "preemptive_puncturing": "preemptive puncturing",
    "genie_urllc": "genie (URLLC-aligned)",
}

_SCHEME_STYLE = {
    "phasor_rotation": dict(color="tab:blue", marker="o"),
    "interference_nulling": dict(color="tab:red", marker="s"),
    "random": dict(color="tab:green", marker="^"),
    "missed_preamble": dict(color="tab:gray", marker="v"),
    "preemptive_puncturing": dict(color="tab:purple", marker="d"),
    "genie_urllc": dict(color="tab:olive", marker="*"),
}

_X_LABELS = {
    "rate_target_urllc": "URLLC target rate (bits/s/Hz)",
    "power_ratio_db": "eMBB-to-URLLC power ratio (dB)",
    "miss_detection_rate": "miss-detection rate",
    "num_elements": "number of surface elements",
    "p_embb_dbm": "eMBB transmit power (dBm)",
    "none": "",
}


def _series(rows: list[ResultRow], metric: str) -> dict[str, list[ResultRow]]:
    per_scheme: dict[str, list[ResultRow]] = {}
    for row in rows:
        if row.metric != metric:
            continue
        per_scheme.setdefault(row.scheme, []).append(row)
    for series in per_scheme.values():
        series.sort(key=lambda r: (r.sweep_value is not None, r.sweep_value))
    return per_scheme


def _x_values(series: list[ResultRow]) -> list[float]:
    return [r.sweep_value if r.sweep_value is not None else 0.0 for r in series]


def _draw_outage(ax, rows: list[ResultRow], metric: str, sweep_param: str):
    for scheme, series in _series(rows, metric).items():
        x = _x_values(series)
        y = [r.estimate for r in series]
        err_lo = [max(0.0, r.estimate - r.ci_low) for r in series]
        err_hi = [max(0.0, r.ci_high - r.estimate) for r in series]
        style = _SCHEME_STYLE.get(scheme, {})
        ax.errorbar(
            x, y, yerr=[err_lo, err_hi],
            label=_SCHEME_LABELS.get(scheme, scheme),
            capsize=2, markersize=4, linewidth=1.2, **style,
        )
    ax.set_yscale("log")
    if sweep_param == "miss_detection_rate":
        ax.set_xscale("symlog", linthresh=1e-3)
    ax.set_xlabel(_X_LABELS.get(sweep_param, sweep_param))
    ax.set_ylabel("outage probability" if metric == "urllc_outage" else "eMBB outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)


def _draw_se(ax, rows: list[ResultRow], sweep_param: str, xi_current, xi_family):
    per_scheme = _series(rows, "embb_se")
    for scheme, series in per_scheme.items():
        x = _x_values(series)
        y = [r.estimate for r in series]
        style = _SCHEME_STYLE.get(scheme, {})
        ax.plot(x, y, label=_SCHEME_LABELS.get(scheme, scheme), markersize=4, linewidth=1.2, **style)
        if xi_current is not None and xi_family:
            # the erased fraction only rescales the pre-log, so other overheads
            # are exact rescalings of the measured curve
            for xi_other in xi_family:
                if abs(xi_other - xi_current) < 1e-12:
                    continue
                factor = (1.0 - xi_other) / (1.0 - xi_current)
                ax.plot(
                    x, [v * factor for v in y],
                    linestyle="--", linewidth=1.0, alpha=0.7,
                    label=f"erased fraction {xi_other:g}",
                )
        break  # the wideband metric is scheme-independent; one curve suffices
    ax.set_xlabel(_X_LABELS.get(sweep_param, sweep_param))
    ax.set_ylabel("eMBB spectral efficiency (bits/s/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)


def render_results(
    rows: list[ResultRow],
    path: str | Path,
    *,
    title: str | None = None,
    xi_current: float | None = None,
    xi_family: tuple[float, ...] = (),
) -> Path:
    """Render the run's figure: outage panel, spectral-efficiency panel, or both.

    When xi_current/xi_family are given, the SE panel overlays the analytic
    pre-log rescalings of the measured curve for the other erased fractions.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sweep_param = rows[0].sweep_param if rows else "none"
    has_outage = any(r.metric == "urllc_outage" and r.estimate > 0 for r in rows)
    want_se = bool(xi_family) or not has_outage
    panels = 1 + (has_outage and want_se)
    fig, axes = plt.subplots(1, panels, figsize=(6.0 * panels, 4.2))
    axes = [axes] if panels == 1 else list(axes)
    idx = 0
    if has_outage:
        _draw_outage(axes[idx], rows, "urllc_outage", sweep_param)
        idx += 1
    if want_se and idx < len(axes):
        _draw_se(axes[idx], rows, sweep_param, xi_current, xi_family)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
