"""Static SVG residual charts, one per scenario."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import ScenarioReport  # noqa: E402

FLOOR = 1e-17


def plot_residuals(report: ScenarioReport, out_dir) -> Path | None:
    """Residual against case index on a log scale, with each row's tolerance as a marker."""
    rows = [r for r in report.rows if r.judged and r.abs_residual is not None]
    if not rows:
        return None
    xs = [r.case_id for r in rows]
    res = [max(r.abs_residual, FLOOR) if math.isfinite(r.abs_residual) else float("nan") for r in rows]
    tol = [max(r.tolerance, FLOOR) if r.tolerance else float("nan") for r in rows]
    plt.rcParams["svg.hashsalt"] = "hadamard-kit"
    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    ax.plot(xs, res, marker="o", ms=3, lw=0.8, label="abs residual")
    ax.plot(xs, tol, ls="none", marker="_", ms=8, color="tab:red", label="tolerance")
    fails = [(r.case_id, max(r.abs_residual, FLOOR)) for r in rows if not r.passed and math.isfinite(r.abs_residual)]
    if fails:
        ax.plot(*zip(*fails), ls="none", marker="x", color="black", label="fail")
    ax.set_yscale("log")
    ax.set_xlabel("case")
    ax.set_ylabel("residual")
    ax.set_title(report.scenario)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = Path(out_dir) / f"{report.scenario}.svg"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
