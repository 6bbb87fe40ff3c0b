"""Projection service functions."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from climpanel.app import resolve_spec
from climpanel.errors import ConfigurationError
from climpanel.estimation.spec import ModelSpec
from climpanel.runlog import log_run
from climpanel.schemas.projection import ProjectRequest, ProjectResponse
from climpanel.utils.config import Config, InitialLevels


def _variants(request: ProjectRequest) -> dict[str, ModelSpec]:
    variants: dict[str, ModelSpec] = {}
    for path in request.specs:
        spec = resolve_spec(path)
        variants[spec.name] = spec
    for name in request.variants:
        variants[name] = resolve_spec(variant=name)
    if not variants:
        variants["common_nolag"] = resolve_spec(variant="common_nolag")
    return variants


def _option_overrides(request: ProjectRequest) -> dict[str, Any]:
    overrides: dict[str, Any] = {
        "bias_correct": request.bias_correct,
        "regime_switching": request.regime_switching,
    }
    if request.start_year is not None:
        overrides["start_year"] = request.start_year
    if request.end_year is not None:
        overrides["end_year"] = request.end_year
    if request.initial_levels is not None:
        try:
            overrides["initial_levels"] = InitialLevels(request.initial_levels)
        except ValueError as e:
            raise ConfigurationError(
                f"Unknown initial levels {request.initial_levels}",
                suggestion=f"Valid values: {', '.join(m.value for m in InitialLevels)}",
            ) from e
    return overrides


def run_projection(config: Config, request: ProjectRequest) -> ProjectResponse:
    """Bootstrap each variant and project every climate and growth cell into a run store.

    Raises:
        ConfigurationError: If the climate directory is missing or empty.
        ValidationError: If baselines or projected climate do not cover the panel.
    """
    from climpanel.aggregation import load_shares
    from climpanel.estimation import load_panel
    from climpanel.projection import (
        ProjectionOptions,
        RunStore,
        build_growth_scenarios,
        discover_climate,
        load_growth_paths,
        run_ensemble,
    )

    defaults = config.projection
    panel = load_panel(Path(request.panel))
    variants = _variants(request)
    options = ProjectionOptions.from_defaults(defaults, **_option_overrides(request))
    climates = discover_climate(Path(request.climate_dir), request.rcps)

    paths = load_growth_paths(Path(request.growth)) if request.growth else None
    weights = None
    if request.shares:
        weights = load_shares(Path(request.shares), defaults.baseline_window).national().to_dict()
    growths = build_growth_scenarios(panel, request.growth_kinds, paths, defaults.baseline_window, weights)

    draws = request.draws if request.draws is not None else defaults.draws
    store = RunStore(Path(request.out))
    result = run_ensemble(
        panel,
        variants,
        climates,
        growths,
        store,
        options,
        n_draws=draws,
        seed=request.seed,
        defaults=config.estimation,
        log_dir=config.log_dir,
    )
    log_run(
        "project",
        {
            "variants": sorted(variants),
            "scenarios": len(climates),
            "draws": draws,
            "seed": request.seed,
            "rows": result.rows,
        },
        log_dir=config.log_dir,
    )
    return ProjectResponse.from_domain(result, str(store.root), draws)
