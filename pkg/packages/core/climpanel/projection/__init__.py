"""Climate-impact projections with block-bootstrap uncertainty."""

from climpanel.projection.bootstrap import BootstrapDraws, block_bootstrap
from climpanel.projection.climate import ClimateScenarioData, discover_climate, load_climate
from climpanel.projection.engine import (
    ClimateExposure,
    ProjectionOptions,
    ProjectionPaths,
    ResponseCoefficients,
    bias_correction,
    climate_exposure,
    delta,
    delta_matrix,
    project_path,
    project_provinces,
)
from climpanel.projection.ensemble import EnsembleResult, initial_levels, observed_levels, run_ensemble
from climpanel.projection.growth import (
    GROWTH_KINDS,
    GrowthScenario,
    baseline_growth,
    build_growth_scenarios,
    estimate_linkage,
    load_growth_paths,
    national_growth,
    ssp_annual_growth,
)
from climpanel.projection.store import RUN_COLUMNS, PartitionKey, RunStore

__all__ = [
    "GROWTH_KINDS",
    "RUN_COLUMNS",
    "BootstrapDraws",
    "ClimateExposure",
    "ClimateScenarioData",
    "EnsembleResult",
    "GrowthScenario",
    "PartitionKey",
    "ProjectionOptions",
    "ProjectionPaths",
    "ResponseCoefficients",
    "RunStore",
    "baseline_growth",
    "bias_correction",
    "block_bootstrap",
    "build_growth_scenarios",
    "climate_exposure",
    "delta",
    "delta_matrix",
    "discover_climate",
    "estimate_linkage",
    "initial_levels",
    "load_climate",
    "load_growth_paths",
    "national_growth",
    "observed_levels",
    "project_path",
    "project_provinces",
    "run_ensemble",
    "ssp_annual_growth",
]
