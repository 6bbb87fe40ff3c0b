"""Specification-selection service functions."""

from __future__ import annotations

from pathlib import Path

from climpanel.errors import ConfigurationError
from climpanel.runlog import log_run
from climpanel.schemas.selection import SelectRequest, SelectResponse
from climpanel.utils.config import Config
from climpanel.utils.io import write_csv


def run_select(config: Config, request: SelectRequest) -> SelectResponse:
    """Score bin candidates out of time and out of sample and pick a winner.

    Writes cv.csv with every candidate's scores and selected.cfg with the
    winning bin spec.
    """
    from climpanel.estimation import load_model_spec, load_panel, save_model_spec
    from climpanel.selection import (
        DEFAULT_CANDIDATES,
        YearEffectImputation,
        load_candidates,
        select,
    )

    try:
        year_effect = YearEffectImputation(request.year_effect)
    except ValueError as e:
        raise ConfigurationError(
            f"Unknown year-effect imputation {request.year_effect}",
            suggestion=f"Valid values: {', '.join(m.value for m in YearEffectImputation)}",
        ) from e

    panel = load_panel(Path(request.panel))
    candidates = load_candidates(Path(request.candidates)) if request.candidates else list(DEFAULT_CANDIDATES)
    base = load_model_spec(Path(request.base_spec)) if request.base_spec else None
    report = select(candidates, panel, request.split_year, base, year_effect, config.estimation)

    out_dir = Path(request.out_dir)
    outputs = {"cv": str(out_dir / "cv.csv"), "selected": str(out_dir / "selected.cfg")}
    write_csv(report.to_frame(), Path(outputs["cv"]))
    save_model_spec(report.winner.to_spec(base), Path(outputs["selected"]))

    log_run(
        "select-spec",
        {"winner": report.winner.id, "candidates": len(candidates), "skipped": report.skipped},
        log_dir=config.log_dir,
    )
    return SelectResponse.from_domain(report, outputs)
