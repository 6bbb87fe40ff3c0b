"""Regional and national aggregation of province projections."""

from climpanel.aggregation.impacts import (
    SCOPES,
    ImpactSummary,
    gdp_ratio,
    grp_ratio,
    scope_ratios,
    summarize,
)
from climpanel.aggregation.report import figure_tables, summarize_store, write_report
from climpanel.aggregation.shares import PopulationShares, load_shares, shares_from_frame

__all__ = [
    "SCOPES",
    "ImpactSummary",
    "PopulationShares",
    "figure_tables",
    "gdp_ratio",
    "grp_ratio",
    "load_shares",
    "scope_ratios",
    "shares_from_frame",
    "summarize",
    "summarize_store",
    "write_report",
]
