"""Report service functions."""

from __future__ import annotations

from pathlib import Path

from climpanel.errors import ValidationError
from climpanel.runlog import log_run
from climpanel.schemas.reports import ReportRequest, ReportResponse
from climpanel.utils.config import Config


def run_report(config: Config, request: ReportRequest) -> ReportResponse:
    """Summarize a run store into summary.csv and one plot-ready table per scope.

    Raises:
        NotFoundError: If the run store has no index.
        IncompleteRegionError: If a region lacks a province projection.
    """
    from climpanel.aggregation import SCOPES, load_shares, summarize_store, write_report
    from climpanel.projection import RunStore

    unknown = sorted(set(request.scopes) - set(SCOPES))
    if unknown:
        raise ValidationError(
            f"Unknown scopes {unknown}",
            details={"valid": list(SCOPES)},
        )
    shares = load_shares(Path(request.shares), config.projection.baseline_window)
    summary = summarize_store(
        RunStore(Path(request.runs)),
        shares,
        scopes=request.scopes,
        years=request.years,
        include_point=request.include_point,
    )
    files = write_report(summary, Path(request.out))
    scenarios = sorted(
        {f"{r.variant}/{r.rcp}/{r.growth}" for r in summary[["variant", "rcp", "growth"]].itertuples()}
    )
    log_run("report", {"out": request.out, "rows": len(summary)}, log_dir=config.log_dir)
    return ReportResponse(out=request.out, files=[str(f) for f in files], rows=len(summary), scenarios=scenarios)
