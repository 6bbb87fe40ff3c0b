"""Gridded hourly temperature and daily rainfall, loaded from CSV.

Expected files:
    hourly:  cell_id,lat,lon,timestamp_utc,temp_c
    daily:   cell_id,date,precip_mm

Each covered day must have exactly 24 hourly records and timestamps must be
strictly increasing within a cell. Gaps are not imputed.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from climpanel.errors import InvalidDataError, MissingDataError, UniquenessViolation
from climpanel.utils.io import read_csv
from climpanel.utils.logging import get_logger

TEMP_MIN = -90.0
TEMP_MAX = 60.0
HOURLY_COLUMNS = ["cell_id", "lat", "lon", "timestamp_utc", "temp_c"]
DAILY_COLUMNS = ["cell_id", "date", "precip_mm"]

logger = get_logger("climpanel.weather")


@dataclass
class CellSeries:
    """One grid cell: hourly temperatures laid out as (day, hour)."""

    cell_id: str
    lat: float
    lon: float
    dates: np.ndarray  # datetime64[D], strictly increasing
    temps: np.ndarray  # shape (n_days, 24)
    precip_dates: np.ndarray = field(default_factory=lambda: np.array([], dtype="datetime64[D]"))
    precip: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))


def _locate(cell_id: str, available: np.ndarray, wanted: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(available, wanted)
    ok = pos < available.size
    ok[ok] = available[pos[ok]] == wanted[ok]
    if not np.all(ok):
        first = wanted[np.argmin(ok)]
        raise MissingDataError(
            f"No record for cell {cell_id} on {first}",
            details={"cell": cell_id, "date": str(first)},
            suggestion="Fill gaps upstream; hourly data is never imputed",
        )
    return pos


@dataclass
class GridSet:
    """All cells of a weather grid, keyed by cell id."""

    cells: dict[str, CellSeries]

    def _cell(self, cell_id: str, date: np.datetime64) -> CellSeries:
        if cell_id not in self.cells:
            raise MissingDataError(
                f"Cell {cell_id} has no weather records",
                details={"cell": cell_id, "date": str(date)},
            )
        return self.cells[cell_id]

    def hourly_block(self, cell_ids: Sequence[str], dates: np.ndarray) -> np.ndarray:
        """Hourly temperatures as an array of shape (cells, days, 24)."""
        out = np.empty((len(cell_ids), dates.size, 24), dtype=float)
        for i, cell_id in enumerate(cell_ids):
            cell = self._cell(cell_id, dates[0])
            out[i] = cell.temps[_locate(cell_id, cell.dates, dates)]
        return out

    def precip_block(self, cell_ids: Sequence[str], dates: np.ndarray) -> np.ndarray:
        """Daily rainfall totals as an array of shape (cells, days)."""
        out = np.empty((len(cell_ids), dates.size), dtype=float)
        for i, cell_id in enumerate(cell_ids):
            cell = self._cell(cell_id, dates[0])
            out[i] = cell.precip[_locate(cell_id, cell.precip_dates, dates)]
        return out

    def years(self) -> list[int]:
        """Calendar years touched by any hourly record."""
        found: set[int] = set()
        for cell in self.cells.values():
            found.update(cell.dates.astype("datetime64[Y]").astype(int) + 1970)
        return sorted(int(y) for y in found)


def year_dates(year: int) -> np.ndarray:
    """Every calendar date of a year (365 or 366 days)."""
    return np.arange(
        np.datetime64(f"{year}-01-01"), np.datetime64(f"{year + 1}-01-01"), dtype="datetime64[D]"
    )


def _bad_line(frame: pd.DataFrame, mask: pd.Series) -> int:
    # header is line 1
    return int(frame.index[mask.to_numpy()][0]) + 2


def load_hourly_frame(path: Path) -> pd.DataFrame:
    """Read and validate the hourly temperature CSV."""
    frame = read_csv(path, HOURLY_COLUMNS, "Hourly grid")
    frame["cell_id"] = frame["cell_id"].astype(str)
    temps = pd.to_numeric(frame["temp_c"], errors="coerce")
    bad = ~np.isfinite(temps) | (temps < TEMP_MIN) | (temps > TEMP_MAX)
    if bad.any():
        line = _bad_line(frame, bad)
        raise InvalidDataError(
            f"Temperature outside [{TEMP_MIN}, {TEMP_MAX}] or not finite at {path}:{line}",
            details={"file": str(path), "line": line},
        )
    frame["temp_c"] = temps.astype(float)
    frame["ts"] = pd.to_datetime(frame["timestamp_utc"], utc=True)

    step = frame.groupby("cell_id", sort=False)["ts"].diff()
    bad = step.notna() & (step <= pd.Timedelta(0))
    if bad.any():
        line = _bad_line(frame, bad)
        raise InvalidDataError(
            f"Timestamps not strictly increasing at {path}:{line}",
            details={"file": str(path), "line": line},
        )
    frame["date"] = frame["ts"].dt.tz_localize(None).dt.floor("D")

    counts = frame.groupby(["cell_id", "date"], sort=False).size()
    short = counts[counts != 24]
    if not short.empty:
        cell_id, date = short.index[0]
        raise MissingDataError(
            f"Cell {cell_id} has {int(short.iloc[0])} hourly records on {date.date()}, expected 24",
            details={"file": str(path), "cell": cell_id, "date": str(date.date())},
        )
    return frame


def load_daily_frame(path: Path) -> pd.DataFrame:
    """Read and validate the daily rainfall CSV."""
    frame = read_csv(path, DAILY_COLUMNS, "Daily precipitation")
    frame["cell_id"] = frame["cell_id"].astype(str)
    rain = pd.to_numeric(frame["precip_mm"], errors="coerce")
    bad = ~np.isfinite(rain) | (rain < 0)
    if bad.any():
        line = _bad_line(frame, bad)
        raise InvalidDataError(
            f"Precipitation negative or not finite at {path}:{line}",
            details={"file": str(path), "line": line},
        )
    frame["precip_mm"] = rain.astype(float)
    frame["date"] = pd.to_datetime(frame["date"]).dt.floor("D")
    dup = frame.duplicated(["cell_id", "date"])
    if dup.any():
        line = _bad_line(frame, dup)
        raise UniquenessViolation(
            f"Duplicate (cell_id, date) at {path}:{line}",
            details={"file": str(path), "line": line},
        )
    return frame


def grid_from_frames(hourly: pd.DataFrame, daily: pd.DataFrame | None = None) -> GridSet:
    """Assemble a GridSet from validated hourly and daily frames."""
    cells: dict[str, CellSeries] = {}
    for cell_id, group in hourly.sort_values(["cell_id", "ts"], kind="stable").groupby(
        "cell_id", sort=True
    ):
        temps = group["temp_c"].to_numpy(dtype=float).reshape(-1, 24)
        dates = group["date"].to_numpy(dtype="datetime64[D]")[::24]
        cells[str(cell_id)] = CellSeries(
            cell_id=str(cell_id),
            lat=float(group["lat"].iloc[0]),
            lon=float(group["lon"].iloc[0]),
            dates=dates,
            temps=temps,
        )

    if daily is not None:
        for cell_id, group in daily.sort_values(["cell_id", "date"]).groupby("cell_id", sort=True):
            cell = cells.get(str(cell_id))
            if cell is None:
                cell = CellSeries(
                    cell_id=str(cell_id),
                    lat=float("nan"),
                    lon=float("nan"),
                    dates=np.array([], dtype="datetime64[D]"),
                    temps=np.empty((0, 24)),
                )
                cells[str(cell_id)] = cell
            cell.precip_dates = group["date"].to_numpy(dtype="datetime64[D]")
            cell.precip = group["precip_mm"].to_numpy(dtype=float)

    logger.info("Loaded weather grid with %d cells", len(cells))
    return GridSet(cells=cells)


def load_grid(hourly_path: Path, daily_path: Path | None = None) -> GridSet:
    """Load the hourly temperature grid and optional daily rainfall grid."""
    hourly = load_hourly_frame(hourly_path)
    daily = load_daily_frame(daily_path) if daily_path is not None else None
    return grid_from_frames(hourly, daily)
