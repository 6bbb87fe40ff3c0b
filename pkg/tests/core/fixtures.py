"""Small panels and single-cell weather grids for testing."""

import numpy as np
import pandas as pd

from climpanel.estimation.panel import PanelDataset
from climpanel.estimation.spec import DEFAULT_BIN_EDGES
from climpanel.weather.grid import CellSeries, GridSet, year_dates
from climpanel.weather.regressors import precip_bin_columns, temp_bin_columns
from climpanel.weather.weights import FIRST_YEAR, LAST_YEAR, PopulationWeight, WeightMap

REGION_CYCLE = ("north", "south", "east")
PRECIP_EDGES = (0.0, 10.0, 20.0, 30.0, 40.0)


def make_panel_frame(
    n_provinces: int = 6,
    n_years: int = 12,
    seed: int = 0,
    start_year: int = 2000,
    beta: tuple[float, float] = (0.5, -0.2),
    noise: float = 0.1,
    fine_bins: bool = False,
) -> pd.DataFrame:
    """Unit-scale regressors with province and year effects.

    Temperature bin columns use the coarse edges directly so that bin specs
    coarsen onto themselves, or 1 degree edges from 0 to 45 with ``fine_bins``.
    """
    rng = np.random.default_rng(seed)
    province_fe = rng.normal(2.0, 1.0, size=n_provinces)
    year_fe = rng.normal(0.0, 1.0, size=n_years)
    income = np.linspace(50_000.0, 150_000.0, n_provinces)
    tbins = temp_bin_columns([float(e) for e in range(46)] if fine_bins else DEFAULT_BIN_EDGES)
    pbins = precip_bin_columns(PRECIP_EDGES)

    rows = []
    for p in range(n_provinces):
        for j in range(n_years):
            t1, t2, rain, rain_sq, hdd, cdd = rng.normal(size=6)
            growth = (
                beta[0] * t1
                + beta[1] * t2
                + 0.1 * rain
                + province_fe[p]
                + year_fe[j]
                + noise * rng.normal()
            )
            row = {
                "province_id": f"P{p:02d}",
                "year": start_year + j,
                "growth": growth,
                "region_id": REGION_CYCLE[p % len(REGION_CYCLE)],
                "gpp_pc": income[p] * (1.0 + 0.01 * j),
                "temp_p1": t1,
                "temp_p2": t2,
                "precip": rain,
                "precip_sq": rain_sq,
                "hdd_23": hdd,
                "cdd_28": cdd,
            }
            row.update(zip(tbins, rng.dirichlet(np.ones(len(tbins))) * 365, strict=True))
            row.update(zip(pbins, rng.dirichlet(np.ones(len(pbins))) * 365, strict=True))
            rows.append(row)
    return pd.DataFrame(rows)


def make_panel(**kwargs: object) -> PanelDataset:
    return PanelDataset.from_frame(make_panel_frame(**kwargs))  # type: ignore[arg-type]


def single_cell_grid(
    temps: np.ndarray,
    year: int,
    rain: np.ndarray | None = None,
    cell_id: str = "c0",
) -> GridSet:
    """One cell covering every day of ``year``; ``temps`` has shape (days, 24)."""
    dates = year_dates(year)
    rain = np.zeros(dates.size) if rain is None else np.asarray(rain, dtype=float)
    cell = CellSeries(
        cell_id=cell_id,
        lat=13.75,
        lon=100.5,
        dates=dates,
        temps=np.asarray(temps, dtype=float),
        precip_dates=dates,
        precip=rain,
    )
    return GridSet(cells={cell_id: cell})


def constant_grid(temperature: float, year: int, cell_id: str = "c0") -> GridSet:
    days = year_dates(year).size
    return single_cell_grid(np.full((days, 24), temperature), year, cell_id=cell_id)


def single_cell_weights(province_id: str = "P00", cell_id: str = "c0") -> WeightMap:
    return WeightMap(
        cell_weights={"poly0": [(cell_id, 1.0)]},
        population_weights={province_id: [PopulationWeight("poly0", 1.0, FIRST_YEAR, LAST_YEAR)]},
    )
