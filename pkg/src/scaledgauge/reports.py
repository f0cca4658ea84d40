"""Check records, convergence fits, and deterministic report files.

CSV cells are written with repr() so floats round-trip and two runs
with the same inputs produce byte-identical files.  Wall-clock duration
goes only into the summary document, never into a CSV.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class CheckRecord:
    """One verified quantity: observed against expected at a tolerance.

    ``relation`` documents how observed and expected are compared:
    "max<=" (observed below tolerance), "slope>=" (observed at least
    expected), or "equal" (exact match required).
    """

    name: str
    observed: float
    expected: float
    tolerance: float
    passed: bool
    relation: str = "max<="


def check_max(name: str, observed: float, tolerance: float) -> CheckRecord:
    return CheckRecord(name, float(observed), 0.0, tolerance,
                       bool(observed <= tolerance), "max<=")


def check_at_least(name: str, observed: float, minimum: float) -> CheckRecord:
    return CheckRecord(name, float(observed), minimum, 0.0,
                       bool(observed >= minimum), ">=")


def check_slope(name: str, observed: float, minimum: float) -> CheckRecord:
    return check_at_least(name, observed, minimum)


def check_exact(name: str, observed: float) -> CheckRecord:
    return CheckRecord(name, float(observed), 0.0, 0.0,
                       bool(observed == 0.0), "equal")


def check_flag(name: str, passed: bool) -> CheckRecord:
    return CheckRecord(name, 1.0 if passed else 0.0, 1.0, 0.0,
                       bool(passed), "equal")


@dataclass(frozen=True)
class ConvergenceFit:
    """Least-squares slope of log(residual) against log(spacing)."""

    name: str
    slope: float
    intercept: float
    points: tuple[tuple[float, float], ...]


def fit_log_slope(name: str, spacings, residuals) -> ConvergenceFit:
    xs = np.log(np.asarray(spacings, dtype=float))
    ys = np.log(np.maximum(np.asarray(residuals, dtype=float), 1e-300))
    slope, intercept = np.polyfit(xs, ys, 1)
    pts = tuple(zip([float(s) for s in spacings], [float(r) for r in residuals]))
    return ConvergenceFit(name, float(slope), float(intercept), pts)


@dataclass
class ExperimentReport:
    """All checks and fits of one experiment run."""

    experiment: str
    checks: list[CheckRecord] = field(default_factory=list)
    fits: list[ConvergenceFit] = field(default_factory=list)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record


Table = tuple[list[str], list[list]]


def checks_table(report: ExperimentReport) -> Table:
    header = ["check", "relation", "observed", "expected", "tolerance", "pass"]
    rows = [[c.name, c.relation, c.observed, c.expected, c.tolerance,
             int(c.passed)] for c in report.checks]
    return header, rows


def fits_table(report: ExperimentReport) -> Table:
    header = ["fit", "spacing", "residual", "slope", "intercept"]
    rows = []
    for f in report.fits:
        for spacing, residual in f.points:
            rows.append([f.name, spacing, residual, f.slope, f.intercept])
    return header, rows


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return repr(value)
    return str(value)


def write_csv(path: Path, table: Table) -> None:
    header, rows = table
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_report(out_dir: Path, report: ExperimentReport,
                 tables: dict[str, Table] | None = None) -> Path:
    """Write <out>/<experiment>/summary plus one CSV per table."""
    exp_dir = out_dir / report.experiment
    exp_dir.mkdir(parents=True, exist_ok=True)
    all_tables = {"checks": checks_table(report)}
    if report.fits:
        all_tables["fits"] = fits_table(report)
    if tables:
        all_tables.update(tables)
    for name, table in all_tables.items():
        write_csv(exp_dir / f"{name}.csv", table)
    summary = {
        "experiment": report.experiment,
        "passed": report.passed,
        "n_checks": len(report.checks),
        "failed_checks": sorted(c.name for c in report.checks if not c.passed),
        "duration_s": report.duration_s,
        "tables": sorted(all_tables),
    }
    summary_path = exp_dir / "summary"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return exp_dir
