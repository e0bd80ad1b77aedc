"""Scenario rows, reports and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .. import __version__

TAIL_COLUMNS = ["computed", "expected", "abs_residual", "tolerance", "pass"]


@dataclass
class Row:
    """One case. ``tolerance`` None marks a diagnostic row that is reported but not judged."""

    case_id: int
    params: dict
    computed: float
    expected: float | None = None
    abs_residual: float | None = None
    tolerance: float | None = None
    passed: bool | None = None
    flag: str = ""

    @property
    def judged(self) -> bool:
        return self.passed is not None


def judged(case_id, params, computed, expected, tolerance, residual=None, flag="") -> Row:
    """Row passing iff the residual is at most the tolerance; residual defaults to |computed - expected|."""
    if residual is None:
        residual = abs(computed - expected) if math.isfinite(computed) and math.isfinite(expected) else math.inf
    return Row(case_id, params, computed, expected, residual, tolerance, bool(residual <= tolerance), flag)


def bound_row(case_id, params, computed, bound, flag="") -> Row:
    """Row passing iff computed <= bound; the residual is the excess over the bound (0 when within)."""
    excess = max(0.0, computed - bound) if math.isfinite(computed) else math.inf
    return Row(case_id, params, computed, bound, excess, bound, bool(computed <= bound), flag)


def check_row(case_id, params, computed, ok: bool, expected=None, flag="") -> Row:
    """Row judged by a boolean condition (classifications); tolerance 0 means exact agreement."""
    return Row(case_id, params, computed, expected, 0.0 if ok else 1.0, 0.0, bool(ok), flag)


def diagnostic(case_id, params, computed, flag="diagnostic") -> Row:
    return Row(case_id, params, computed, None, None, None, None, flag)


@dataclass
class ScenarioReport:
    scenario: str
    param_columns: list
    rows: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    wall_time: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def columns(self) -> list:
        cols = ["scenario", "case_id", *self.param_columns, *TAIL_COLUMNS]
        if any(r.flag for r in self.rows):
            cols.append("flag")
        return cols

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows if r.judged)

    def summary(self) -> dict:
        judged_rows = [r for r in self.rows if r.judged]
        residuals = [r.abs_residual for r in judged_rows if r.abs_residual is not None and math.isfinite(r.abs_residual)]
        return {
            "rows": len(self.rows),
            "judged": len(judged_rows),
            "passed": sum(1 for r in judged_rows if r.passed),
            "failed": sum(1 for r in judged_rows if not r.passed),
            "diagnostic": len(self.rows) - len(judged_rows),
            "max_residual": max(residuals) if residuals else 0.0,
            "all_pass": self.passed,
        }

    def row_dicts(self) -> list[dict]:
        out = []
        for r in self.rows:
            d = {"scenario": self.scenario, "case_id": r.case_id}
            d.update({c: r.params.get(c, "") for c in self.param_columns})
            d.update(
                computed=r.computed,
                expected=r.expected,
                abs_residual=r.abs_residual,
                tolerance=r.tolerance,
                **{"pass": r.passed},
            )
            if "flag" in self.columns:
                d["flag"] = r.flag
            out.append(d)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        for d in self.row_dicts():
            writer.writerow({k: _cell(v) for k, v in d.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "scenario": self.scenario,
            "columns": self.columns,
            "rows": [{k: _json_value(v) for k, v in d.items()} for d in self.row_dicts()],
            "summary": self.summary(),
            "provenance": {
                "version": version_string(),
                "wall_time_s": self.wall_time,
                "config": self.config,
            },
            "extras": _json_value(self.extras),
        }
        return json.dumps(doc, indent=2, sort_keys=False)

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / f"{self.scenario}.csv", "json": out / f"{self.scenario}.json"}
        paths["csv"].write_text(self.to_csv())
        paths["json"].write_text(self.to_json())
        return paths


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def version_string() -> str:
    """``git describe``-style version of the installed package, falling back to the release number."""
    try:
        desc = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{__version__}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__
