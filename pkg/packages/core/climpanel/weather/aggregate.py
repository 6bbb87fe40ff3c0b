"""Population-weighted aggregation of gridded weather into annual regressors.

Every operation reduces to a weighted sum over (cell, day, hour) with
per-cell weights w_c = sum_j w_jp * w_cj. Nonlinear transforms (powers,
bin indicators, degree-day clipping) are applied to hourly values before
averaging over the day. Accumulation is done in extended precision.
"""

from __future__ import annotations

import datetime as dt
from collections.abc import Sequence

import numpy as np
import pandas as pd

from climpanel.errors import InvalidDataError, ValidationError
from climpanel.utils.logging import get_logger
from climpanel.weather.grid import GridSet, year_dates
from climpanel.weather.regressors import AnnualRegressorSet, RegressorSchema, check_edges
from climpanel.weather.weights import WeightMap

logger = get_logger("climpanel.weather")

_EXT = np.longdouble


# =============================================================================
# Kernels on (cells, days, 24) arrays
# =============================================================================


def _hourly_weights(weights: np.ndarray) -> np.ndarray:
    return np.asarray(weights, dtype=_EXT)[:, None, None] / 24


def _weighted_counts(weights: np.ndarray, index: np.ndarray, n_bins: int) -> np.ndarray:
    """Exact per-cell member counts, then one weighted sum over cells."""
    per_cell = index.reshape(index.shape[0], -1)
    counts = np.stack([np.bincount(row, minlength=n_bins) for row in per_cell])
    return np.sum(np.asarray(weights, dtype=_EXT)[:, None] * counts.astype(_EXT), axis=0)


def polynomial_terms(weights: np.ndarray, temps: np.ndarray, max_order: int) -> np.ndarray:
    """Sum over days of the weighted daily mean of hourly T**m, m = 1..max_order."""
    if not 1 <= max_order <= 7:
        raise ValidationError(
            f"Polynomial order must be between 1 and 7, got {max_order}",
            details={"max_order": max_order},
        )
    w = _hourly_weights(weights)
    t = np.asarray(temps, dtype=_EXT)
    out = np.empty(max_order, dtype=_EXT)
    power = np.ones_like(t)
    for m in range(max_order):
        power = power * t
        out[m] = np.sum(w * power)
    return out


def bin_days(weights: np.ndarray, temps: np.ndarray, edges: Sequence[float]) -> np.ndarray:
    """Fractional days per bin [-inf, e0), [e0, e1), ..., [eN, inf)."""
    arr = check_edges(edges)
    index = np.searchsorted(arr, np.asarray(temps, dtype=float), side="right")
    return _weighted_counts(weights, index, arr.size + 1) / 24


def degree_days(
    weights: np.ndarray, temps: np.ndarray, hdd_threshold: float, cdd_threshold: float
) -> tuple[float, float]:
    """Hourly-averaged heating and cooling degree days."""
    if hdd_threshold > cdd_threshold:
        raise ValidationError(
            f"HDD threshold {hdd_threshold} exceeds CDD threshold {cdd_threshold}",
            details={"hdd_threshold": hdd_threshold, "cdd_threshold": cdd_threshold},
        )
    w = _hourly_weights(weights)
    t = np.asarray(temps, dtype=_EXT)
    hdd = np.sum(w * np.maximum(0, _EXT(hdd_threshold) - t))
    cdd = np.sum(w * np.maximum(0, t - _EXT(cdd_threshold)))
    return float(hdd), float(cdd)


def precip_terms(
    weights: np.ndarray, rain: np.ndarray, edges: Sequence[float]
) -> tuple[float, float, np.ndarray]:
    """Linear, squared and binned daily rainfall.

    Bins are right-closed: rain <= e0 (zero days), (e0, e1], ..., > eN.
    Squares are taken per cell before weighting.
    """
    arr = check_edges(edges, kind="precipitation")
    r = np.asarray(rain, dtype=_EXT)
    if np.any(r < 0):
        raise InvalidDataError("Negative precipitation in rainfall block")
    w = np.asarray(weights, dtype=_EXT)[:, None]
    linear = np.sum(w * r)
    squared = np.sum(w * r * r)
    index = np.searchsorted(arr, np.asarray(rain, dtype=float), side="left")
    return float(linear), float(squared), _weighted_counts(weights, index, arr.size + 1)


# =============================================================================
# Province-level operations
# =============================================================================


def _as_date(date: dt.date | str | np.datetime64) -> np.ndarray:
    return np.array([np.datetime64(date, "D")])


def daily_mean_temperature(
    province_id: str,
    date: dt.date | str | np.datetime64,
    grids: GridSet,
    weights: WeightMap,
) -> float:
    """Population-weighted daily mean temperature for one province and date."""
    day = _as_date(date)
    year = int(day.astype("datetime64[Y]").astype(int)[0]) + 1970
    cell_ids, w = weights.cell_weights_for(province_id, year)
    temps = grids.hourly_block(cell_ids, day)
    return float(polynomial_terms(w, temps, 1)[0])


def _year_block(
    province_id: str, year: int, grids: GridSet, weights: WeightMap
) -> tuple[np.ndarray, np.ndarray]:
    cell_ids, w = weights.cell_weights_for(province_id, year)
    return w, grids.hourly_block(cell_ids, year_dates(year))


def annual_polynomial_regressors(
    province_id: str, year: int, max_order: int, grids: GridSet, weights: WeightMap
) -> list[float]:
    """Annual sums of daily means of hourly T**m for m = 1..max_order."""
    w, temps = _year_block(province_id, year, grids, weights)
    return [float(v) for v in polynomial_terms(w, temps, max_order)]


def annual_bin_days(
    province_id: str, year: int, bin_edges: Sequence[float], grids: GridSet, weights: WeightMap
) -> list[float]:
    """Days per temperature bin, counted by the fraction of hours inside it."""
    check_edges(bin_edges)
    w, temps = _year_block(province_id, year, grids, weights)
    return [float(v) for v in bin_days(w, temps, bin_edges)]


def annual_degree_days(
    province_id: str,
    year: int,
    hdd_threshold: float,
    cdd_threshold: float,
    grids: GridSet,
    weights: WeightMap,
) -> tuple[float, float]:
    w, temps = _year_block(province_id, year, grids, weights)
    return degree_days(w, temps, hdd_threshold, cdd_threshold)


def annual_precip_regressors(
    province_id: str, year: int, bin_edges: Sequence[float], grids: GridSet, weights: WeightMap
) -> tuple[float, float, list[float]]:
    """Linear and squared annual rainfall plus days per rainfall bin."""
    cell_ids, w = weights.cell_weights_for(province_id, year)
    rain = grids.precip_block(cell_ids, year_dates(year))
    linear, squared, bins = precip_terms(w, rain, bin_edges)
    return linear, squared, [float(v) for v in bins]


def annual_regressor_set(
    province_id: str, year: int, schema: RegressorSchema, grids: GridSet, weights: WeightMap
) -> AnnualRegressorSet:
    """Every regressor in ``schema`` for one province-year, from a single data pass."""
    cell_ids, w = weights.cell_weights_for(province_id, year)
    dates = year_dates(year)
    temps = grids.hourly_block(cell_ids, dates)
    rain = grids.precip_block(cell_ids, dates)
    return regressors_from_arrays(province_id, year, w, temps, rain, schema)


def regressors_from_arrays(
    province_id: str,
    year: int,
    weights: np.ndarray,
    temps: np.ndarray,
    rain: np.ndarray,
    schema: RegressorSchema,
) -> AnnualRegressorSet:
    """Compute a regressor set from already extracted weight, temperature and rain arrays."""
    hdd: dict[float, float] = {}
    cdd: dict[float, float] = {}
    for thr_h, thr_c in schema.degree_day_thresholds:
        hdd[thr_h], cdd[thr_c] = degree_days(weights, temps, thr_h, thr_c)
    linear, squared, rain_bins = precip_terms(weights, rain, schema.precip_bin_edges)
    return AnnualRegressorSet(
        province_id=province_id,
        year=year,
        poly_terms=[float(v) for v in polynomial_terms(weights, temps, schema.max_order)],
        bin_days=[float(v) for v in bin_days(weights, temps, schema.temp_bin_edges)],
        hdd=hdd,
        cdd=cdd,
        precip_linear=linear,
        precip_sq=squared,
        precip_bin_days=[float(v) for v in rain_bins],
    )


def aggregate_panel(
    grids: GridSet,
    weights: WeightMap,
    schema: RegressorSchema | None = None,
    provinces: Sequence[str] | None = None,
    years: Sequence[int] | None = None,
) -> pd.DataFrame:
    """Province-year regressor table ordered by (province_id, year).

    Args:
        grids: Hourly temperature and daily rainfall grid.
        weights: Validated weight map.
        schema: Regressor columns to emit (defaults to RegressorSchema()).
        provinces: Provinces to aggregate (defaults to all in the weight map).
        years: Years to aggregate (defaults to every year with hourly data).
    """
    schema = schema or RegressorSchema()
    provinces = list(provinces) if provinces is not None else weights.provinces()
    years = list(years) if years is not None else grids.years()
    rows = []
    for province_id in provinces:
        for year in years:
            regressors = annual_regressor_set(province_id, year, schema, grids, weights)
            rows.append(regressors.to_row(schema))
        logger.debug("Aggregated %s over %d years", province_id, len(years))
    logger.info("Aggregated %d provinces x %d years", len(provinces), len(years))
    return pd.DataFrame(rows, columns=["province_id", "year", *schema.columns()])
