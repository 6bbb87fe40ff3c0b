"""Ensemble runner: variants x climate scenarios x growth paths x bootstrap draws.

Each (variant, rcp, model, growth) cell streams its draws into one run-store
partition, so the full ensemble is never held in memory.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from time import perf_counter

import numpy as np

from climpanel.errors import AppError, MissingBaselineError
from climpanel.estimation.panel import INCOME_COLUMN, PanelDataset
from climpanel.estimation.spec import ModelSpec
from climpanel.projection.bootstrap import BootstrapDraws, block_bootstrap
from climpanel.projection.climate import ClimateScenarioData
from climpanel.projection.engine import (
    ProjectionOptions,
    ResponseCoefficients,
    climate_exposure,
    project_provinces,
)
from climpanel.projection.growth import GrowthScenario
from climpanel.projection.store import PartitionKey, RunStore
from climpanel.runlog import log_run
from climpanel.utils.config import EstimationDefaults, InitialLevels
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.projection")


@dataclass
class EnsembleResult:
    partitions: list[PartitionKey] = field(default_factory=list)
    rows: int = 0
    redraws: dict[str, int] = field(default_factory=dict)
    runtime_seconds: float = 0.0


def observed_levels(panel: PanelDataset, provinces: Sequence[str], year: int) -> np.ndarray:
    """Observed output per capita of each province in ``year``."""
    frame = panel.frame
    if INCOME_COLUMN not in frame.columns:
        raise MissingBaselineError("Observed output levels need a gpp_pc column in the panel")
    rows = frame[frame["year"] == year].set_index("province_id")[INCOME_COLUMN]
    missing = [p for p in provinces if p not in rows.index]
    if missing:
        raise MissingBaselineError(
            f"No gpp_pc in {year} for provinces {missing}",
            details={"year": year, "provinces": missing},
        )
    return rows.loc[list(provinces)].to_numpy(dtype=float)


def initial_levels(panel: PanelDataset, provinces: Sequence[str], options: ProjectionOptions) -> np.ndarray | None:
    """Observed output per capita in the year before the horizon, or None for unit levels."""
    if options.initial_levels is InitialLevels.UNIT:
        return None
    return observed_levels(panel, provinces, options.start_year - 1)


def run_ensemble(
    panel: PanelDataset,
    variants: Mapping[str, ModelSpec],
    climates: Sequence[ClimateScenarioData],
    growths: Sequence[GrowthScenario],
    store: RunStore,
    options: ProjectionOptions,
    n_draws: int,
    seed: int,
    defaults: EstimationDefaults | None = None,
    draws: Mapping[str, BootstrapDraws] | None = None,
    log_dir: Path | None = None,
) -> EnsembleResult:
    """Project every cell of the ensemble into ``store``.

    One set of bootstrap draws per variant is shared by all climate models,
    RCPs and growth paths. A failing cell is logged and re-raised.
    """
    start_time = perf_counter()
    result = EnsembleResult()
    provinces = panel.provinces
    years = options.years.tolist()
    levels = initial_levels(panel, provinces, options)
    scenarios = sorted(climates, key=lambda c: (c.rcp, c.model_id))

    for name in sorted(variants):
        spec = variants[name]
        boot = draws[name] if draws and name in draws else block_bootstrap(
            panel, spec, n_draws, seed, defaults
        )
        result.redraws[name] = boot.redraws
        responses = [
            ResponseCoefficients.from_vector(boot.coef_names, row, spec) for row in boot.coefficients
        ]
        flags = ranking = None
        if spec.is_interacted:
            by_province = panel.low_income_by_province()
            flags = np.array([by_province[p] for p in provinces])
            if options.regime_switching:
                ranking = levels if levels is not None else observed_levels(
                    panel, provinces, options.start_year - 1
                )

        for climate in scenarios:
            if climate.observed is None:
                climate = climate.with_observed(panel.frame)
            exposure = climate_exposure(climate, spec, responses[0].bases, options, provinces)
            for growth in growths:
                key = PartitionKey(name, climate.rcp, climate.model_id, growth.kind)
                cell = {"variant": name, "rcp": key.rcp, "model": key.model, "growth": key.growth}
                try:
                    base = growth.rates(provinces, years)
                    with store.partition_writer(key) as writer:
                        for draw, response in enumerate(responses):
                            paths = project_provinces(
                                response, exposure, base, options, flags, levels, ranking
                            )
                            frame = paths.to_frame()
                            frame.insert(2, "draw", draw)
                            writer.write(frame)
                except AppError as e:
                    log_run("cell", cell, error=e.message, log_dir=log_dir)
                    raise
                result.partitions.append(key)
                result.rows += writer.rows
                log_run("cell", {**cell, "rows": writer.rows}, log_dir=log_dir)

    result.runtime_seconds = perf_counter() - start_time
    logger.info(
        "Ensemble wrote %d partitions (%d rows) in %.2fs",
        len(result.partitions), result.rows, result.runtime_seconds,
    )
    return result
