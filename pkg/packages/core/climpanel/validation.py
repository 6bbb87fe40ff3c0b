"""Dataset validation for the CSV inputs of a run.

Every check reports violations instead of stopping at the first one, so a
single pass lists all problems with the file and line they come from.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from climpanel.aggregation.shares import load_shares
from climpanel.errors import AppError
from climpanel.estimation.panel import load_panel
from climpanel.projection.climate import discover_climate
from climpanel.projection.growth import load_growth_paths
from climpanel.utils.io import read_csv
from climpanel.utils.logging import get_logger
from climpanel.weather.grid import load_daily_frame, load_hourly_frame
from climpanel.weather.weights import (
    CELL_WEIGHT_COLUMNS,
    POPULATION_WEIGHT_COLUMNS,
    WEIGHT_TOL,
    weight_map_from_frames,
)

logger = get_logger("climpanel.validation")


@dataclass(frozen=True)
class Violation:
    file: str
    line: int | None
    code: str
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {"file": self.file, "line": self.line, "code": self.code, "message": self.message}


@dataclass
class DatasetPaths:
    """Files to validate. Any subset may be given."""

    grid_hourly: Path | None = None
    grid_daily: Path | None = None
    cell_weights: Path | None = None
    population_weights: Path | None = None
    panel: Path | None = None
    climate_dir: Path | None = None
    growth: Path | None = None
    shares: Path | None = None


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, file: Path | str, code: str, message: str, line: int | None = None) -> None:
        self.violations.append(Violation(str(file), line, code, message))

    def add_error(self, file: Path | str, error: AppError) -> None:
        line = error.details.get("line")
        self.add(error.details.get("file", file), error.code, error.message, int(line) if line is not None else None)


def _guard(report: ValidationReport, file: Path, check: Callable[[], Any]) -> Any:
    """Run a loader; record its AppError as a violation and return None on failure."""
    report.checked.append(str(file))
    try:
        return check()
    except AppError as e:
        report.add_error(file, e)
        return None


# =============================================================================
# Individual checks
# =============================================================================


def _check_weights(report: ValidationReport, cells_path: Path, population_path: Path) -> set[str] | None:
    cells = _guard(report, cells_path, lambda: read_csv(cells_path, CELL_WEIGHT_COLUMNS, "Cell weights"))
    population = _guard(
        report, population_path, lambda: read_csv(population_path, POPULATION_WEIGHT_COLUMNS, "Population weights")
    )
    if cells is None or population is None:
        return None

    bad_polygons = 0
    for polygon_id, rows in cells.groupby("polygon_id", sort=True):
        total = float(rows["w_cj"].astype(float).sum())
        if abs(total - 1.0) > WEIGHT_TOL:
            bad_polygons += 1
            report.add(
                cells_path,
                "INVALID_WEIGHTS",
                f"Cell weights for polygon {polygon_id} sum to {total:.12g}, expected 1",
                line=int(rows.index[0]) + 2,
            )
    if bad_polygons:
        return None
    weights = _guard(report, population_path, lambda: weight_map_from_frames(cells, population))
    if weights is None:
        return None
    return {str(c) for c in cells["cell_id"].unique()}


def _check_grid(report: ValidationReport, hourly_path: Path | None, daily_path: Path | None, cells: set[str] | None) -> None:
    if hourly_path is not None:
        hourly = _guard(report, hourly_path, lambda: load_hourly_frame(hourly_path))
        if hourly is not None and cells is not None:
            missing = sorted(cells - set(hourly["cell_id"].unique()))
            if missing:
                report.add(
                    hourly_path,
                    "MISSING_DATA",
                    f"Cells referenced by the weights have no hourly data: {missing[:10]}",
                )
    if daily_path is not None:
        _guard(report, daily_path, lambda: load_daily_frame(daily_path))


def _year_gaps(frame: pd.DataFrame) -> list[tuple[str, int]]:
    """(province, first missing year) for provinces whose years are not contiguous."""
    gaps = []
    for province, years in frame.groupby("province_id")["year"]:
        values = np.sort(years.astype(int).unique())
        steps = np.diff(values)
        if np.any(steps != 1):
            gaps.append((str(province), int(values[np.argmax(steps != 1)]) + 1))
    return gaps


def _check_panel(report: ValidationReport, path: Path) -> list[str] | None:
    panel = _guard(report, path, lambda: load_panel(path))
    if panel is None:
        return None
    for province, year in _year_gaps(panel.frame):
        report.add(path, "MISSING_DATA", f"Panel years for province {province} have a gap at {year}")
    return panel.provinces


def _check_climate(report: ValidationReport, climate_dir: Path, provinces: list[str] | None) -> None:
    scenarios = _guard(report, climate_dir, lambda: discover_climate(climate_dir))
    for scenario in scenarios or []:
        file = Path(climate_dir) / scenario.rcp / f"{scenario.model_id}.csv"
        frame = scenario.projected
        for province, year in _year_gaps(frame):
            report.add(file, "MISSING_DATA", f"Projected years for province {province} have a gap at {year}")
        if provinces is not None:
            missing = sorted(set(provinces) - set(frame["province_id"].astype(str)))
            if missing:
                report.add(file, "MISSING_DATA", f"No projected climate for provinces {missing}")


def validate(paths: DatasetPaths) -> ValidationReport:
    """Check schema, weight normalization, panel uniqueness and year coverage.

    Returns:
        A report; ``report.ok`` is False when any violation was found.
    """
    report = ValidationReport()
    for name, value in vars(paths).items():
        if value is not None and name != "climate_dir" and not Path(value).exists():
            report.add(value, "NOT_FOUND", f"{name} file not found: {value}")
    if not report.ok:
        return report

    cells = None
    if paths.cell_weights is not None and paths.population_weights is not None:
        cells = _check_weights(report, Path(paths.cell_weights), Path(paths.population_weights))
    _check_grid(report, paths.grid_hourly, paths.grid_daily, cells)

    provinces = _check_panel(report, Path(paths.panel)) if paths.panel is not None else None
    if paths.climate_dir is not None:
        _check_climate(report, Path(paths.climate_dir), provinces)
    if paths.growth is not None:
        _guard(report, Path(paths.growth), lambda: load_growth_paths(Path(paths.growth)))
    if paths.shares is not None:
        shares = _guard(report, Path(paths.shares), lambda: load_shares(Path(paths.shares)))
        if shares is not None and provinces is not None:
            missing = sorted(set(provinces) - set(shares.provinces))
            if missing:
                report.add(paths.shares, "MISSING_DATA", f"No population share for provinces {missing}")

    logger.info("Validated %d files: %d violations", len(report.checked), len(report.violations))
    return report
