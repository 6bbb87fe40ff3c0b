"""End-to-end pipeline: aggregate, fit, select-spec, project and report.

Each stage runs through the same service functions as the individual CLI
commands. The first failing stage aborts the run with a StageError that
names it.
"""

from __future__ import annotations

import os
from collections.abc import Callable
from pathlib import Path
from time import perf_counter
from typing import Any

import numpy as np
import pandas as pd

from climpanel import __version__
from climpanel.app.datasets import run_validate
from climpanel.app.estimation import run_fit
from climpanel.app.projection import run_projection
from climpanel.app.reports import run_report
from climpanel.app.selection import run_select
from climpanel.app.weather import run_aggregate
from climpanel.errors import AppError, StageError, ValidationError
from climpanel.runlog import log_run, set_run_source
from climpanel.schemas.datasets import ValidateRequest
from climpanel.schemas.estimation import FitRequest
from climpanel.schemas.pipeline import (
    PipelineRequest,
    PipelineResponse,
    RunConfig,
    StageRow,
    load_run_config,
)
from climpanel.schemas.projection import ProjectRequest
from climpanel.schemas.reports import ReportRequest
from climpanel.schemas.selection import SelectRequest
from climpanel.schemas.weather import AggregateRequest
from climpanel.utils.config import Config
from climpanel.utils.io import sha256_tree, write_json
from climpanel.utils.logging import get_logger

logger = get_logger("climpanel.pipeline")


def _run_stage(
    name: str,
    step: Callable[[], dict[str, Any]],
    stages: list[StageRow],
    log_dir: Path | None,
) -> dict[str, Any]:
    logger.info("Stage %s started", name)
    start = perf_counter()
    try:
        outputs = step()
    except AppError as e:
        log_run(f"stage:{name}", {}, error=e.message, log_dir=log_dir)
        raise StageError(name, e) from e
    elapsed = perf_counter() - start
    stages.append(StageRow(name=name, runtime_seconds=elapsed, outputs={k: str(v) for k, v in outputs.items()}))
    log_run(f"stage:{name}", {"seconds": round(elapsed, 3)}, log_dir=log_dir)
    logger.info("Stage %s finished in %.2fs", name, elapsed)
    return outputs


def _relative(path: Path, base: Path) -> str:
    return os.path.relpath(path, base)


def _manifest(run: RunConfig, base: Path, summary: Path) -> dict[str, Any]:
    """Versions, seed, config and SHA-256 digests of every input and of summary.csv."""
    config = run.model_dump(mode="json")
    for name, path in run.input_paths().items():
        config[name] = _relative(path, base)
    config["out_dir"] = _relative(run.out_dir, base)
    inputs: dict[str, str] = {}
    for path in run.input_paths().values():
        for item, digest in sha256_tree(path).items():
            inputs[_relative(Path(item), base)] = digest
    return {
        "versions": {"climpanel": __version__, "numpy": np.__version__, "pandas": pd.__version__},
        "seed": run.seed,
        "config": config,
        "inputs": dict(sorted(inputs.items())),
        "outputs": {_relative(summary, base): sha256_tree(summary)[str(summary)]},
    }


def run_pipeline(config: Config, request: PipelineRequest) -> PipelineResponse:
    """Run every stage of a pipeline.yaml and write manifest.json into its out_dir.

    Raises:
        StageError: Tagged with the failing stage; keeps the original exit code.
    """
    set_run_source("pipeline")
    stages: list[StageRow] = []
    log_dir = config.log_dir
    config_path = Path(request.config)
    base = config_path.parent.resolve()

    loaded: list[RunConfig] = []

    def load() -> dict[str, Any]:
        loaded.append(load_run_config(config_path))
        return {"config": config_path}

    _run_stage("config", load, stages, log_dir)
    run = loaded[0]
    out = Path(run.out_dir)
    panel = out / "panel.csv"

    def validate_inputs() -> dict[str, Any]:
        response = run_validate(
            config,
            ValidateRequest(
                grid_hourly=str(run.grid_hourly),
                grid_daily=str(run.grid_daily) if run.grid_daily else None,
                cell_weights=str(run.cell_weights),
                population_weights=str(run.population_weights),
                panel=str(run.panel),
                climate_dir=str(run.climate_dir),
                growth=str(run.growth) if run.growth else None,
                shares=str(run.shares),
            ),
        )
        if not response.ok:
            first = response.violations[0]
            raise ValidationError(
                f"{len(response.violations)} input violations; first: {first.file}: {first.message}",
                code=first.code,
                details={"violations": [v.model_dump() for v in response.violations]},
            )
        return {"checked": len(response.checked)}

    def aggregate() -> dict[str, Any]:
        response = run_aggregate(
            config,
            AggregateRequest(
                grid_hourly=str(run.grid_hourly),
                grid_daily=str(run.grid_daily) if run.grid_daily else None,
                cell_weights=str(run.cell_weights),
                population_weights=str(run.population_weights),
                out=str(out / "regressors.csv"),
                panel=str(run.panel),
                panel_out=str(panel),
            ),
        )
        return {"regressors": response.out, "panel": response.panel_out}

    fit_variant = None if run.spec or not run.variants else run.variants[0]

    def fit_stage() -> dict[str, Any]:
        response = run_fit(
            config,
            FitRequest(
                panel=str(panel),
                out_dir=str(out / "fit"),
                spec=str(run.spec) if run.spec else None,
                variant=fit_variant,
            ),
        )
        return response.outputs

    specs = [str(run.spec)] if run.spec else []

    def select_stage() -> dict[str, Any]:
        response = run_select(
            config,
            SelectRequest(
                panel=str(panel),
                out_dir=str(out / "selection"),
                candidates=str(run.candidates) if run.candidates else None,
                base_spec=str(run.spec) if run.spec else None,
            ),
        )
        specs.append(response.outputs["selected"])
        return {**response.outputs, "winner": response.winner}

    def project() -> dict[str, Any]:
        response = run_projection(
            config,
            ProjectRequest(
                panel=str(panel),
                climate_dir=str(run.climate_dir),
                out=str(out / "runs"),
                seed=run.seed,
                specs=specs,
                variants=run.variants,
                rcps=run.rcps,
                growth=str(run.growth) if run.growth else None,
                growth_kinds=run.growth_kinds,
                shares=str(run.shares),
                draws=run.draws,
                bias_correct=run.bias_correct,
                regime_switching=run.regime_switching,
                start_year=run.start_year,
                end_year=run.end_year,
            ),
        )
        return {"runs": response.out, "rows": response.rows}

    def report() -> dict[str, Any]:
        response = run_report(
            config,
            ReportRequest(runs=str(out / "runs"), shares=str(run.shares), out=str(out / "report" / "summary.csv")),
        )
        return {"summary": response.out, "figures": len(response.files) - 1}

    _run_stage("validate", validate_inputs, stages, log_dir)
    _run_stage("aggregate", aggregate, stages, log_dir)
    _run_stage("fit", fit_stage, stages, log_dir)
    if run.select_spec:
        _run_stage("select-spec", select_stage, stages, log_dir)
    _run_stage("project", project, stages, log_dir)
    summary = Path(_run_stage("report", report, stages, log_dir)["summary"])

    manifest = out / "manifest.json"
    write_json(_manifest(run, base, summary), manifest)
    logger.info("Pipeline finished; manifest at %s", manifest)
    return PipelineResponse(out_dir=str(out), stages=stages, manifest=str(manifest), summary=str(summary))
