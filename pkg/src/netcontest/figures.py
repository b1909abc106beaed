"""Render sweep reports as figures next to the CSV output."""

from __future__ import annotations

import math
from pathlib import Path


def render_sweep_figures(rows, csv_path) -> list:
    """Write profit and percentage-increase curves alongside the sweep CSV.

    Produces <stem>_profits.png (defender profit vs delta, solid = committed
    leader, dashed = simultaneous play) and <stem>_pct_increase.png, one line
    per budget scenario. Failed rows (NaN) are skipped. Returns the paths
    written.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    scenarios: dict = {}
    for row in rows:
        if math.isnan(row.ne_profit_d) or math.isnan(row.se_profit_d):
            continue
        scenarios.setdefault((row.scenario, row.budget_d), []).append(row)
    if not scenarios:
        return []
    written = []

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (label, budget_d), cells in sorted(scenarios.items()):
        cells = sorted(cells, key=lambda r: r.delta)
        deltas = [r.delta for r in cells]
        color = ax.plot(
            deltas,
            [r.se_profit_d for r in cells],
            "-",
            label=f"{label}: B_D={budget_d:g} (leader)",
        )[0].get_color()
        ax.plot(
            deltas,
            [r.ne_profit_d for r in cells],
            "--",
            color=color,
            label=f"{label}: B_D={budget_d:g} (simultaneous)",
        )
    ax.set_xlabel("valuation split delta")
    ax.set_ylabel("defender profit")
    ax.set_title("Defender profit vs valuation split")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    profits_path = csv_path.with_name(csv_path.stem + "_profits.png")
    fig.savefig(profits_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(profits_path)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (label, budget_d), cells in sorted(scenarios.items()):
        cells = sorted(cells, key=lambda r: r.delta)
        ax.plot(
            [r.delta for r in cells],
            [r.pct_increase_d for r in cells],
            "-o",
            markersize=3,
            label=f"{label}: B_D={budget_d:g}",
        )
    ax.set_xlabel("valuation split delta")
    ax.set_ylabel("profit increase from commitment (%)")
    ax.set_title("Defender gain from moving first")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    pct_path = csv_path.with_name(csv_path.stem + "_pct_increase.png")
    fig.savefig(pct_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(pct_path)
    return written
