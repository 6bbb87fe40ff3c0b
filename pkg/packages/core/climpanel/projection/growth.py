"""No-climate-change growth paths: observed baseline or SSP pathways.

growth.csv holds country GDP per capita at five-year intervals:
``scenario,year,gdp_pc`` with scenario ssp3 or ssp5. Province growth under
an SSP follows a per-province linkage on the previous year's national rate.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from climpanel.errors import MissingBaselineError, OutOfRangeError, ValidationError
from climpanel.estimation.panel import PanelDataset
from climpanel.utils.io import read_csv
from climpanel.utils.logging import get_logger

BASELINE = "baseline"
SSP_KINDS = ("ssp3", "ssp5")
GROWTH_KINDS = (BASELINE, *SSP_KINDS)

logger = get_logger("climpanel.projection")


def baseline_growth(panel: PanelDataset, province: str, window: tuple[int, int] = (2003, 2022)) -> float:
    """Mean observed growth of ``province`` over ``window`` (percentage points)."""
    frame = panel.frame
    start, end = window
    rows = frame[(frame["province_id"] == str(province)) & frame["year"].between(start, end)]
    if rows.empty:
        raise MissingBaselineError(
            f"No observed growth for province {province} in {start}-{end}",
            details={"province": str(province), "window": [start, end]},
        )
    return float(rows["growth"].mean())


def ssp_annual_growth(path: pd.Series, year: int) -> float:
    """Annual rate (fraction) within the five-year block containing ``year``.

    ``path`` maps years to GDP per capita. The rate in [y0, y1) is
    (G1 / G0) ** (1 / (y1 - y0)) - 1; the last point belongs to the final block.

    Raises:
        OutOfRangeError: If ``year`` lies outside the path.
    """
    points = path.sort_index()
    years = points.index.to_numpy(dtype=int)
    if years.size < 2 or not years[0] <= year <= years[-1]:
        raise OutOfRangeError(
            f"Year {year} is outside the growth path "
            f"{years[0] if years.size else '?'}-{years[-1] if years.size else '?'}",
            details={"year": int(year)},
        )
    i = min(int(np.searchsorted(years, year, side="right")) - 1, years.size - 2)
    g0, g1 = float(points.iloc[i]), float(points.iloc[i + 1])
    return (g1 / g0) ** (1.0 / (years[i + 1] - years[i])) - 1.0


def national_growth(panel: PanelDataset, weights: Mapping[str, float] | None = None) -> pd.Series:
    """Country growth per year: weighted (or plain) mean of province growth."""
    frame = panel.frame
    if weights is None:
        return frame.groupby("year")["growth"].mean()
    w = frame["province_id"].map(weights).fillna(0.0)
    num = (frame["growth"] * w).groupby(frame["year"]).sum()
    den = w.groupby(frame["year"]).sum()
    return num / den


def estimate_linkage(
    panel: PanelDataset,
    national: pd.Series,
    window: tuple[int, int] = (2003, 2022),
) -> dict[str, tuple[float, float]]:
    """Per-province OLS of growth on the previous year's national growth."""
    frame = panel.frame
    start, end = window
    rows = frame[frame["year"].between(start, end)].copy()
    rows["national_l1"] = (rows["year"] - 1).map(national)
    rows = rows.dropna(subset=["national_l1"])
    linkage: dict[str, tuple[float, float]] = {}
    for province in panel.provinces:
        own = rows[rows["province_id"] == province]
        x = own["national_l1"].to_numpy(dtype=float)
        y = own["growth"].to_numpy(dtype=float)
        if y.size == 0:
            raise MissingBaselineError(
                f"No growth observations for province {province} in {start}-{end}",
                details={"province": province},
            )
        if x.size < 2 or np.ptp(x) == 0:
            logger.warning("Linkage for %s falls back to mean growth (%d rows)", province, y.size)
            linkage[province] = (float(y.mean()), 0.0)
            continue
        slope, intercept = np.polyfit(x, y, 1)
        linkage[province] = (float(intercept), float(slope))
    return linkage


@dataclass
class GrowthScenario:
    """No-climate-change growth (percentage points) per province and year."""

    kind: str
    baseline: dict[str, float] = field(default_factory=dict)
    path: pd.Series | None = None
    linkage: dict[str, tuple[float, float]] = field(default_factory=dict)

    def rates(self, provinces: Sequence[str], years: Sequence[int]) -> np.ndarray:
        if self.kind == BASELINE:
            missing = [p for p in provinces if p not in self.baseline]
            if missing:
                raise MissingBaselineError(f"No baseline growth for {missing}")
            values = np.array([self.baseline[p] for p in provinces])
            return np.repeat(values[:, None], len(years), axis=1)
        if self.path is None:
            raise ValidationError(f"Growth scenario {self.kind} has no GDP path")
        country = np.array([100.0 * ssp_annual_growth(self.path, y - 1) for y in years])
        out = np.empty((len(provinces), len(years)))
        for i, p in enumerate(provinces):
            a, b = self.linkage[p]
            out[i] = a + b * country
        return out


def load_growth_paths(path: Path) -> dict[str, pd.Series]:
    """Read growth.csv into one year-indexed GDP-per-capita series per scenario."""
    frame = read_csv(Path(path), ["scenario", "year", "gdp_pc"], "Growth paths")
    paths: dict[str, pd.Series] = {}
    for scenario, rows in frame.groupby("scenario", sort=True):
        series = rows.set_index(rows["year"].astype(int))["gdp_pc"].astype(float).sort_index()
        if (series <= 0).any() or not np.all(np.isfinite(series)):
            raise ValidationError(
                f"GDP path {scenario} must be positive and finite",
                details={"scenario": str(scenario)},
            )
        paths[str(scenario).lower()] = series
    return paths


def build_growth_scenarios(
    panel: PanelDataset,
    kinds: Sequence[str],
    paths: Mapping[str, pd.Series] | None = None,
    window: tuple[int, int] = (2003, 2022),
    weights: Mapping[str, float] | None = None,
) -> list[GrowthScenario]:
    """Growth scenarios for ``kinds``, estimating the linkage once when needed."""
    unknown = [k for k in kinds if k not in GROWTH_KINDS]
    if unknown:
        raise ValidationError(f"Unknown growth kinds {unknown}", details={"valid": list(GROWTH_KINDS)})
    provinces = panel.provinces
    baseline = {p: baseline_growth(panel, p, window) for p in provinces}
    linkage: dict[str, tuple[float, float]] = {}
    scenarios = []
    for kind in kinds:
        if kind == BASELINE:
            scenarios.append(GrowthScenario(kind=kind, baseline=baseline))
            continue
        if not paths or kind not in paths:
            raise ValidationError(
                f"Growth path for {kind} not found",
                suggestion="Add rows for this scenario to growth.csv",
            )
        if not linkage:
            linkage = estimate_linkage(panel, national_growth(panel, weights), window)
        scenarios.append(GrowthScenario(kind=kind, baseline=baseline, path=paths[kind], linkage=linkage))
    return scenarios
