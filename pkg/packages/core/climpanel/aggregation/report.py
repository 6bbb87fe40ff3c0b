"""Summary tables and plot-ready series from a run store."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import asdict
from pathlib import Path

import pandas as pd

from climpanel.aggregation.impacts import SCOPES, scope_ratios, summarize
from climpanel.aggregation.shares import PopulationShares
from climpanel.projection.store import PartitionKey, RunStore
from climpanel.utils.io import write_csv
from climpanel.utils.logging import get_logger

SUMMARY_COLUMNS = [
    "variant",
    "rcp",
    "growth",
    "scope",
    "unit",
    "year",
    "p5",
    "p50",
    "p95",
    "probability_positive",
    "probability_non_negative",
    "share_negative",
]
FIGURE_COLUMNS = ["year", "median", "p5", "p95", "scenario"]

logger = get_logger("climpanel.aggregation")


def _scenario_groups(store: RunStore) -> dict[tuple[str, str, str], list[PartitionKey]]:
    groups: dict[tuple[str, str, str], list[PartitionKey]] = defaultdict(list)
    for key in store.list_partitions():
        groups[(key.variant, key.rcp, key.growth)].append(key)
    return dict(sorted(groups.items()))


def summarize_store(
    store: RunStore,
    shares: PopulationShares,
    scopes: Sequence[str] = SCOPES,
    years: Sequence[int] | None = None,
    include_point: bool = False,
) -> pd.DataFrame:
    """Summary rows per (variant, rcp, growth, scope, unit, year).

    Climate models and bootstrap draws are pooled. Draw 0 (the point
    estimate) is left out unless it is the only draw or ``include_point``.
    """
    store.require()
    rows = []
    for (variant, rcp, growth), keys in _scenario_groups(store).items():
        runs = pd.concat([store.read_partition(k) for k in keys], ignore_index=True)
        if years is not None:
            runs = runs[runs["year"].isin(list(years))]
        if not include_point and runs["draw"].max() > 0:
            runs = runs[runs["draw"] > 0]
        for scope in scopes:
            cells = scope_ratios(runs, shares, scope)
            for (unit, year), group in cells.groupby(["unit", "year"], sort=True):
                summary = summarize(group["ratio"].to_numpy(), group["share_negative"].to_numpy())
                record = asdict(summary)
                record.pop("n_cells")
                rows.append(
                    {"variant": variant, "rcp": rcp, "growth": growth, "scope": scope,
                     "unit": unit, "year": int(year), **record}
                )
        logger.info("Summarized %s/%s/%s over %d partitions", variant, rcp, growth, len(keys))
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def figure_tables(summary: pd.DataFrame) -> dict[str, pd.DataFrame]:
    """One plot-ready table per scope: year, median, p5, p95, scenario."""
    tables = {}
    for scope, rows in summary.groupby("scope", sort=True):
        scenario = rows["variant"] + "/" + rows["rcp"] + "/" + rows["growth"]
        if scope != "gdp":
            scenario = scenario + "/" + rows["unit"].astype(str)
        table = pd.DataFrame(
            {
                "year": rows["year"],
                "median": rows["p50"],
                "p5": rows["p5"],
                "p95": rows["p95"],
                "scenario": scenario,
            }
        )
        tables[str(scope)] = table.sort_values(["scenario", "year"], kind="stable")[FIGURE_COLUMNS]
    return tables


def write_report(summary: pd.DataFrame, out: Path) -> list[Path]:
    """Write summary.csv at ``out`` and figure_<scope>.csv next to it."""
    out = Path(out)
    written = [out]
    write_csv(summary, out)
    for scope, table in figure_tables(summary).items():
        path = out.with_name(f"figure_{scope}.csv")
        write_csv(table, path)
        written.append(path)
    return written
