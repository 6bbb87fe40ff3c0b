"""CLI entry point for climpanel.

All business logic is delegated to the climpanel.app service layer.
This module handles:
- Click argument parsing
- Rich table formatting for human output
- JSON output when --json flag is used
- Error rendering and exit codes (0 ok, 2 validation, 3 numerical, 4 config)
"""

from __future__ import annotations

import logging
from typing import NoReturn

import click
import pydantic
from rich.console import Console
from rich.table import Table

from climpanel import __version__
from climpanel.errors import EXIT_VALIDATION, AppError, ValidationError
from climpanel.runlog import set_run_source
from climpanel.schemas.errors import ErrorResponse
from climpanel.utils.config import load_config
from climpanel.utils.logging import setup_logging

console = Console()
err_console = Console(stderr=True)


# =============================================================================
# Helpers
# =============================================================================


def _handle_error(ctx: click.Context, error: AppError) -> NoReturn:
    """Render an AppError as Rich text or JSON and exit with its code."""
    if _get_json_flag(ctx):
        click.echo(ErrorResponse.from_error(error).model_dump_json(indent=2))
    else:
        err_console.print(f"[red]Error: {error.message}[/red]")
        if error.suggestion:
            err_console.print(f"[dim]{error.suggestion}[/dim]")
    ctx.exit(error.exit_code)


def _handle_request_error(ctx: click.Context, error: pydantic.ValidationError) -> NoReturn:
    """Report invalid command arguments as a validation error (exit 2)."""
    messages = [f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in error.errors()]
    _handle_error(ctx, ValidationError("Invalid arguments: " + "; ".join(messages), details={"errors": messages}))


def _json_output(data: pydantic.BaseModel) -> None:
    """Print a Pydantic model as JSON on stdout."""
    click.echo(data.model_dump_json(indent=2))


def _get_json_flag(ctx: click.Context) -> bool:
    """Get the --json flag from context."""
    return bool(ctx.obj.get("json", False))


def _years(value: str | None) -> tuple[int | None, int | None]:
    if not value:
        return None, None
    start, _, end = value.partition("-")
    try:
        return int(start), int(end or start)
    except ValueError as e:
        raise click.BadParameter(f"expected START-END, got {value}") from e


# =============================================================================
# CLI Group
# =============================================================================


@click.group()
@click.version_option(version=__version__, prog_name="climpanel")
@click.option("--json", "as_json", is_flag=True, help="Output as JSON")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
@click.pass_context
def cli(ctx: click.Context, as_json: bool, verbose: bool) -> None:
    """climpanel - climate-growth panel estimation and impact projection."""
    ctx.ensure_object(dict)
    set_run_source("cli")
    config = load_config()
    ctx.obj["config"] = config
    ctx.obj["json"] = as_json
    ctx.obj["logger"] = setup_logging(
        log_dir=config.log_dir,
        level=logging.DEBUG if verbose else logging.WARNING,
        log_to_file=True,
    )


# =============================================================================
# Weather aggregation
# =============================================================================


@cli.command()
@click.option("--grid", "grid_hourly", required=True, type=click.Path(exists=True, dir_okay=False), help="Hourly temperature CSV")
@click.option("--precip", "grid_daily", type=click.Path(exists=True, dir_okay=False), help="Daily precipitation CSV")
@click.option("--cell-weights", required=True, type=click.Path(exists=True, dir_okay=False), help="Cell-to-polygon weights CSV")
@click.option("--population-weights", required=True, type=click.Path(exists=True, dir_okay=False), help="Polygon-to-province weights CSV")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Regressor table to write")
@click.option("--province", "provinces", multiple=True, help="Restrict to these provinces")
@click.option("--years", help="Year range START-END (default: every grid year)")
@click.option("--panel", type=click.Path(exists=True, dir_okay=False), help="Panel to merge the regressors into")
@click.option("--panel-out", type=click.Path(dir_okay=False), help="Merged panel path (default: panel_merged.csv next to --out)")
@click.pass_context
def aggregate(
    ctx: click.Context,
    grid_hourly: str,
    grid_daily: str | None,
    cell_weights: str,
    population_weights: str,
    out: str,
    provinces: tuple[str, ...],
    years: str | None,
    panel: str | None,
    panel_out: str | None,
) -> None:
    """Aggregate gridded weather to province-year regressors."""
    from climpanel.app.weather import run_aggregate
    from climpanel.schemas.weather import AggregateRequest

    start, end = _years(years)
    try:
        request = AggregateRequest(
            grid_hourly=grid_hourly,
            grid_daily=grid_daily,
            cell_weights=cell_weights,
            population_weights=population_weights,
            out=out,
            provinces=list(provinces) or None,
            start_year=start,
            end_year=end,
            panel=panel,
            panel_out=panel_out,
        )
        result = run_aggregate(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    console.print(
        f"[green]Wrote {result.rows} province-years x {result.columns} regressors to {result.out}[/green]"
    )
    if result.panel_out:
        console.print(f"[green]Merged panel written to {result.panel_out}[/green]")


# =============================================================================
# Estimation
# =============================================================================


@cli.command()
@click.argument("panel", type=click.Path(exists=True, dir_okay=False))
@click.option("--spec", type=click.Path(exists=True, dir_okay=False), help="spec.cfg to fit")
@click.option("--variant", help="Named variant (baseline, no_precip, djo, common_lag5, ...)")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False), help="Directory for fit outputs")
@click.option("--reference", type=float, default=26.0, show_default=True, help="Reference temperature for the response curve")
@click.pass_context
def fit(
    ctx: click.Context,
    panel: str,
    spec: str | None,
    variant: str | None,
    out_dir: str,
    reference: float,
) -> None:
    """Fit a fixed-effects growth regression with clustered standard errors."""
    from climpanel.app.estimation import run_fit
    from climpanel.schemas.estimation import FitRequest

    try:
        request = FitRequest(panel=panel, spec=spec, variant=variant, out_dir=out_dir, reference=reference)
        result = run_fit(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    table = Table(title=f"Fit: {result.spec} ({result.form})")
    table.add_column("Term", style="cyan")
    table.add_column("Estimate", justify="right")
    table.add_column("Std. err.", justify="right")
    for row in result.coefficients:
        table.add_row(row.name, f"{row.estimate:.6g}", f"{row.std_err:.6g}")
    console.print(table)
    console.print(
        f"n = {result.n_obs}, clusters = {result.cluster_count}, "
        f"R2 = {result.r2:.4f}, within R2 = {result.within_r2:.4f}"
    )
    console.print(f"[dim]Outputs in {out_dir}[/dim]")


# =============================================================================
# Specification selection
# =============================================================================


@cli.command("select-spec")
@click.argument("panel", type=click.Path(exists=True, dir_okay=False))
@click.option("--candidates", type=click.Path(exists=True, dir_okay=False), help="CSV of lower_edge,interval (default: built-in set)")
@click.option("--base-spec", type=click.Path(exists=True, dir_okay=False), help="spec.cfg supplying lags, FE and controls")
@click.option("--split-year", type=int, default=2014, show_default=True, help="Last training year for out-of-time scoring")
@click.option(
    "--year-effect",
    type=click.Choice(["train_mean", "last_train_year"]),
    default="train_mean",
    show_default=True,
    help="Year effect used for held-out years",
)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False), help="Directory for cv.csv and selected.cfg")
@click.pass_context
def select_spec(
    ctx: click.Context,
    panel: str,
    candidates: str | None,
    base_spec: str | None,
    split_year: int,
    year_effect: str,
    out_dir: str,
) -> None:
    """Select temperature bins by out-of-time and out-of-sample RMSE."""
    from climpanel.app.selection import run_select
    from climpanel.schemas.selection import SelectRequest

    try:
        request = SelectRequest(
            panel=panel,
            candidates=candidates,
            base_spec=base_spec,
            split_year=split_year,
            year_effect=year_effect,
            out_dir=out_dir,
        )
        result = run_select(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    table = Table(title=f"Bin candidates (split {result.split_year})")
    table.add_column("Candidate", style="cyan")
    table.add_column("RMSE out-of-time", justify="right")
    table.add_column("RMSE out-of-sample", justify="right")
    table.add_column("Skipped", justify="right")
    for row in result.candidates:
        style = "green bold" if row.winner else ""
        table.add_row(row.id, f"{row.rmse_oot:.6f}", f"{row.rmse_oos:.6f}", str(row.oot_skipped), style=style)
    console.print(table)
    console.print(f"[green]Selected {result.winner}[/green] in {result.runtime_seconds:.2f}s")


# =============================================================================
# Projection
# =============================================================================


@cli.command()
@click.option("--panel", required=True, type=click.Path(exists=True, dir_okay=False), help="Panel CSV with regressors")
@click.option("--climate-dir", required=True, type=click.Path(), help="Directory of <rcp>/<model>.csv")
@click.option("--out", required=True, type=click.Path(file_okay=False), help="Run store directory")
@click.option("--seed", required=True, type=int, help="Bootstrap seed")
@click.option("--spec", "specs", multiple=True, type=click.Path(exists=True, dir_okay=False), help="spec.cfg to project (repeatable)")
@click.option("--variant", "variants", multiple=True, help="Named variant to project (repeatable)")
@click.option("--rcp", "rcps", multiple=True, help="Restrict to these RCPs")
@click.option("--growth", type=click.Path(exists=True, dir_okay=False), help="growth.csv with SSP GDP paths")
@click.option(
    "--growth-kind",
    "growth_kinds",
    multiple=True,
    type=click.Choice(["baseline", "ssp3", "ssp5"]),
    help="No-climate-change growth path (default: baseline)",
)
@click.option("--shares", type=click.Path(exists=True, dir_okay=False), help="shares.csv for national growth weights")
@click.option("--draws", type=int, help="Bootstrap draws (default from config)")
@click.option("--bias-correct", is_flag=True, help="Subtract the model bias over the bias window")
@click.option("--regime-switching", is_flag=True, help="Switch income groups by projected income rank")
@click.option("--years", help="Projection horizon START-END")
@click.option("--initial-levels", type=click.Choice(["unit", "observed"]), help="Starting output levels")
@click.pass_context
def project(
    ctx: click.Context,
    panel: str,
    climate_dir: str,
    out: str,
    seed: int,
    specs: tuple[str, ...],
    variants: tuple[str, ...],
    rcps: tuple[str, ...],
    growth: str | None,
    growth_kinds: tuple[str, ...],
    shares: str | None,
    draws: int | None,
    bias_correct: bool,
    regime_switching: bool,
    years: str | None,
    initial_levels: str | None,
) -> None:
    """Project province growth under climate scenarios with bootstrap draws."""
    from climpanel.app.projection import run_projection
    from climpanel.schemas.projection import ProjectRequest

    start, end = _years(years)
    try:
        request = ProjectRequest(
            panel=panel,
            climate_dir=climate_dir,
            out=out,
            seed=seed,
            specs=list(specs),
            variants=list(variants),
            rcps=list(rcps) or None,
            growth=growth,
            growth_kinds=list(growth_kinds) or ["baseline"],
            shares=shares,
            draws=draws,
            bias_correct=bias_correct,
            regime_switching=regime_switching,
            start_year=start,
            end_year=end,
            initial_levels=initial_levels,
        )
        if not _get_json_flag(ctx):
            console.print("[cyan]Bootstrapping and projecting...[/cyan]")
        result = run_projection(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    console.print(
        f"[green]Wrote {len(result.partitions)} partitions ({result.rows} rows, "
        f"{result.draws} draws) to {result.out} in {result.runtime_seconds:.2f}s[/green]"
    )
    redraws = {k: v for k, v in result.redraws.items() if v}
    if redraws:
        console.print(f"[yellow]Bootstrap redraws: {redraws}[/yellow]")


# =============================================================================
# Reporting
# =============================================================================


@cli.command()
@click.option("--runs", required=True, type=click.Path(exists=True, file_okay=False), help="Run store directory")
@click.option("--shares", required=True, type=click.Path(exists=True, dir_okay=False), help="shares.csv")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="summary.csv path")
@click.option("--scope", "scopes", multiple=True, type=click.Choice(["gdp", "grp", "gpp"]), help="Scopes to report (default: all)")
@click.option("--year", "years", multiple=True, type=int, help="Years to report (default: all)")
@click.option("--include-point", is_flag=True, help="Count the point-estimate draw in the percentiles")
@click.pass_context
def report(
    ctx: click.Context,
    runs: str,
    shares: str,
    out: str,
    scopes: tuple[str, ...],
    years: tuple[int, ...],
    include_point: bool,
) -> None:
    """Summarize projections into percentile tables per scope."""
    from climpanel.app.reports import run_report
    from climpanel.schemas.reports import ReportRequest

    try:
        request = ReportRequest(
            runs=runs,
            shares=shares,
            out=out,
            scopes=list(scopes) or ["gdp", "grp", "gpp"],
            years=list(years) or None,
            include_point=include_point,
        )
        result = run_report(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    console.print(f"[green]Wrote {result.rows} summary rows[/green]")
    for path in result.files:
        console.print(f"  {path}")


# =============================================================================
# Datasets
# =============================================================================


@cli.command()
@click.argument("out", type=click.Path(file_okay=False))
@click.option("--n-provinces", type=int, default=5, show_default=True)
@click.option("--n-years", type=int, default=30, show_default=True)
@click.option("--beta1", type=float, default=0.05, show_default=True, help="Linear temperature coefficient")
@click.option("--beta2", type=float, default=-0.001, show_default=True, help="Quadratic temperature coefficient")
@click.option("--rho", type=float, default=0.0, show_default=True, help="Precipitation coefficient")
@click.option("--fe-scale", type=float, default=1.0, show_default=True)
@click.option("--noise-sd", type=float, default=0.5, show_default=True)
@click.option("--n-lags", type=int, default=0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def synth(
    ctx: click.Context,
    out: str,
    n_provinces: int,
    n_years: int,
    beta1: float,
    beta2: float,
    rho: float,
    fe_scale: float,
    noise_sd: float,
    n_lags: int,
    seed: int,
) -> None:
    """Write a synthetic fixture set and a pipeline.yaml for it."""
    from climpanel.app.datasets import run_synth
    from climpanel.schemas.datasets import SynthRequest

    try:
        request = SynthRequest(
            out=out,
            n_provinces=n_provinces,
            n_years=n_years,
            beta1=beta1,
            beta2=beta2,
            rho=rho,
            fe_scale=fe_scale,
            noise_sd=noise_sd,
            n_lags=n_lags,
            seed=seed,
        )
        result = run_synth(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    console.print(f"[green]Synthetic fixtures written to {result.out}[/green]")
    console.print(f"Run them with: climpanel pipeline {result.files['pipeline']}")


@cli.command()
@click.option("--grid", "grid_hourly", type=click.Path(), help="Hourly temperature CSV")
@click.option("--precip", "grid_daily", type=click.Path(), help="Daily precipitation CSV")
@click.option("--cell-weights", type=click.Path(), help="Cell weights CSV")
@click.option("--population-weights", type=click.Path(), help="Population weights CSV")
@click.option("--panel", type=click.Path(), help="Panel CSV")
@click.option("--climate-dir", type=click.Path(), help="Projected climate directory")
@click.option("--growth", type=click.Path(), help="growth.csv")
@click.option("--shares", type=click.Path(), help="shares.csv")
@click.pass_context
def validate(
    ctx: click.Context,
    grid_hourly: str | None,
    grid_daily: str | None,
    cell_weights: str | None,
    population_weights: str | None,
    panel: str | None,
    climate_dir: str | None,
    growth: str | None,
    shares: str | None,
) -> None:
    """Check dataset files; exits 2 when any violation is found."""
    from climpanel.app.datasets import run_validate
    from climpanel.schemas.datasets import ValidateRequest

    try:
        request = ValidateRequest(
            grid_hourly=grid_hourly,
            grid_daily=grid_daily,
            cell_weights=cell_weights,
            population_weights=population_weights,
            panel=panel,
            climate_dir=climate_dir,
            growth=growth,
            shares=shares,
        )
        result = run_validate(ctx.obj["config"], request)
    except pydantic.ValidationError as e:
        _handle_request_error(ctx, e)
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
    elif result.ok:
        console.print(f"[green]{len(result.checked)} files OK[/green]")
    else:
        table = Table(title="Validation failures")
        table.add_column("File", style="cyan")
        table.add_column("Line", justify="right")
        table.add_column("Code", style="red")
        table.add_column("Message")
        for v in result.violations:
            table.add_row(v.file, "" if v.line is None else str(v.line), v.code, v.message)
        console.print(table)
    if not result.ok:
        ctx.exit(EXIT_VALIDATION)


# =============================================================================
# Pipeline
# =============================================================================


@cli.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(dir_okay=False))
@click.pass_context
def pipeline(ctx: click.Context, config_path: str) -> None:
    """Run aggregate, fit, select-spec, project and report from a pipeline.yaml."""
    from climpanel.app.pipeline import run_pipeline
    from climpanel.schemas.pipeline import PipelineRequest

    try:
        result = run_pipeline(ctx.obj["config"], PipelineRequest(config=config_path))
    except AppError as e:
        _handle_error(ctx, e)

    if _get_json_flag(ctx):
        _json_output(result)
        return
    table = Table(title="Pipeline stages")
    table.add_column("Stage", style="cyan")
    table.add_column("Seconds", justify="right")
    for stage in result.stages:
        table.add_row(stage.name, f"{stage.runtime_seconds:.2f}")
    console.print(table)
    console.print(f"[green]Summary: {result.summary}[/green]")
    console.print(f"[dim]Manifest: {result.manifest}[/dim]")


if __name__ == "__main__":
    cli()
