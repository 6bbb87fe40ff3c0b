"""Weather aggregation service functions."""

from __future__ import annotations

from pathlib import Path

from climpanel.runlog import log_run
from climpanel.schemas.weather import AggregateRequest, AggregateResponse
from climpanel.utils.config import Config
from climpanel.utils.io import write_csv
from climpanel.weather.regressors import RegressorSchema


def schema_from_config(config: Config) -> RegressorSchema:
    defaults = config.aggregation
    return RegressorSchema(
        max_order=defaults.max_order,
        temp_bin_edges=list(defaults.temp_bin_edges),
        degree_day_thresholds=list(defaults.degree_day_thresholds),
        precip_bin_edges=list(defaults.precip_bin_edges),
    )


def run_aggregate(config: Config, request: AggregateRequest) -> AggregateResponse:
    """Aggregate the hourly grid into a province-year regressor table.

    When a panel is given, the regressors are merged into it and the merged
    panel is written next to the regressor table (or to ``panel_out``).

    Raises:
        NotFoundError: If an input file is missing.
        ValidationError: If the grid or weights are malformed.
    """
    from climpanel.estimation.panel import load_panel, save_panel
    from climpanel.weather import aggregate_panel, load_grid, load_weight_map

    grid = load_grid(Path(request.grid_hourly), Path(request.grid_daily) if request.grid_daily else None)
    weights = load_weight_map(Path(request.cell_weights), Path(request.population_weights))
    years = (
        list(range(request.start_year, request.end_year + 1))
        if request.start_year is not None and request.end_year is not None
        else None
    )
    frame = aggregate_panel(grid, weights, schema_from_config(config), request.provinces, years)
    out = Path(request.out)
    write_csv(frame, out)

    panel_out = None
    if request.panel:
        merged = load_panel(Path(request.panel)).merge_regressors(frame)
        panel_out = Path(request.panel_out) if request.panel_out else out.with_name("panel_merged.csv")
        save_panel(merged, panel_out)

    response = AggregateResponse(
        out=str(out),
        rows=len(frame),
        columns=frame.shape[1] - 2,
        provinces=int(frame["province_id"].nunique()),
        years=sorted(int(y) for y in frame["year"].unique()),
        panel_out=str(panel_out) if panel_out else None,
    )
    log_run("aggregate", {"out": response.out, "rows": response.rows}, log_dir=config.log_dir)
    return response
