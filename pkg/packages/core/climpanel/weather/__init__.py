"""Weather aggregation: gridded hourly weather to province-year regressors."""

from climpanel.weather.aggregate import (
    aggregate_panel,
    annual_bin_days,
    annual_degree_days,
    annual_polynomial_regressors,
    annual_precip_regressors,
    annual_regressor_set,
    daily_mean_temperature,
)
from climpanel.weather.grid import CellSeries, GridSet, load_grid
from climpanel.weather.regressors import AnnualRegressorSet, RegressorSchema, coarsen_bins
from climpanel.weather.weights import (
    PopulationWeight,
    WeightMap,
    load_weight_map,
    population_weights_from_counts,
)

__all__ = [
    "AnnualRegressorSet",
    "CellSeries",
    "GridSet",
    "PopulationWeight",
    "RegressorSchema",
    "WeightMap",
    "aggregate_panel",
    "annual_bin_days",
    "annual_degree_days",
    "annual_polynomial_regressors",
    "annual_precip_regressors",
    "annual_regressor_set",
    "coarsen_bins",
    "daily_mean_temperature",
    "load_grid",
    "load_weight_map",
    "population_weights_from_counts",
]
