"""Scenario runner: config in, CSV/JSON (and optional SVG) reports out."""

from __future__ import annotations

import time

import numpy as np

from .config import ScenarioConfig, config_from_dict, load_config
from .report import ScenarioReport
from .scenarios import SCENARIOS, Context, _error_row

__all__ = ["SCENARIOS", "ScenarioConfig", "ScenarioReport", "config_from_dict", "load_config", "run_scenario"]


def build_context(cfg: ScenarioConfig) -> Context:
    rng = np.random.default_rng(cfg.seed)
    X = cfg.model_x.build()
    Y = (cfg.model_y or cfg.model_x).build()
    f = cfg.map.build(X, Y, rng)
    return Context(X, Y, f, rng, cfg.limits.build(), dict(cfg.params), {}, cfg.map.mode)


def run_scenario(cfg: ScenarioConfig, write: bool = True) -> ScenarioReport:
    """Run one configured scenario; writes report files unless ``write`` is false."""
    scenario = SCENARIOS[cfg.scenario]
    t0 = time.perf_counter()
    ctx = build_context(cfg)
    try:
        rows = scenario.run(ctx)
    except Exception as exc:  # noqa: BLE001 - reported as a failed row rather than a crash
        rows = [_error_row(0, {}, exc)]
    report = ScenarioReport(
        scenario=cfg.scenario,
        param_columns=list(scenario.columns),
        rows=rows,
        config=cfg.model_dump(mode="json"),
        wall_time=time.perf_counter() - t0,
        extras=ctx.extras,
    )
    if write:
        report.write(cfg.output.dir)
        if cfg.output.plots:
            from .plots import plot_residuals

            plot_residuals(report, cfg.output.dir)
    return report
