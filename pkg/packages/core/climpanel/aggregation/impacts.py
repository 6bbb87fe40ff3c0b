"""Regional and national impact ratios from province output levels.

Regional and national output per capita are population-weighted sums of
province levels; the impact ratio is the with-climate sum over the
without-climate sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from climpanel.aggregation.shares import PopulationShares
from climpanel.errors import IncompleteRegionError, ValidationError

SCOPES = ("gdp", "grp", "gpp")
CELL_KEYS = ["model", "draw", "year"]


@dataclass(frozen=True)
class ImpactSummary:
    """Percent changes (ratio - 1) * 100 and probabilities over cells."""

    p5: float
    p50: float
    p95: float
    probability_positive: float
    probability_non_negative: float
    share_negative: float
    n_cells: int


def _weighted_ratio(cell: pd.DataFrame, weights: pd.Series, members: list[str], label: str) -> float:
    present = set(cell["province"].astype(str))
    missing = [p for p in members if p not in present]
    if missing:
        raise IncompleteRegionError(
            f"{label} is missing provinces {missing}",
            details={"scope": label, "missing": missing},
        )
    rows = cell.set_index(cell["province"].astype(str)).loc[members]
    w = weights.loc[members].to_numpy()
    return float((w * rows["level_with"]).sum() / (w * rows["level_without"]).sum())


def grp_ratio(cell: pd.DataFrame, shares: PopulationShares, region: str) -> float:
    """Regional ratio for one (model, draw, year) cell of province rows."""
    return _weighted_ratio(cell, shares.within_region(), shares.members(region), f"Region {region}")


def gdp_ratio(cell: pd.DataFrame, shares: PopulationShares) -> float:
    """National ratio for one (model, draw, year) cell of province rows."""
    return _weighted_ratio(cell, shares.national(), shares.provinces, "Country")


def scope_ratios(runs: pd.DataFrame, shares: PopulationShares, scope: str) -> pd.DataFrame:
    """Ratios for every cell at ``scope``.

    Returns columns model, draw, year, unit, ratio, share_negative.

    Raises:
        IncompleteRegionError: If a cell lacks a member province.
    """
    if scope not in SCOPES:
        raise ValidationError(f"Unknown scope {scope!r}", details={"valid": list(SCOPES)})
    runs = runs.assign(province=runs["province"].astype(str))
    if scope == "gpp":
        out = runs[CELL_KEYS + ["province", "gpp_ratio"]].rename(
            columns={"province": "unit", "gpp_ratio": "ratio"}
        )
        return out.assign(share_negative=np.nan)

    if scope == "gdp":
        groups = {"national": (shares.provinces, shares.national())}
    else:
        within = shares.within_region()
        groups = {r: (shares.members(r), within) for r in shares.region_names()}

    frames = []
    for unit, (members, weights) in groups.items():
        rows = runs[runs["province"].isin(members)]
        counts = rows.groupby(CELL_KEYS)["province"].nunique()
        all_cells = runs.groupby(CELL_KEYS).size().index
        counts = counts.reindex(all_cells, fill_value=0)
        if (counts < len(members)).any():
            cell = counts[counts < len(members)].index[0]
            raise IncompleteRegionError(
                f"{unit} cell {dict(zip(CELL_KEYS, cell))} is missing member provinces",
                details={"unit": unit, "expected": len(members), "found": int(counts.loc[cell])},
            )
        w = rows["province"].map(weights)
        aggregated = pd.DataFrame(
            {
                "with": w * rows["level_with"],
                "without": w * rows["level_without"],
                "negative": w * (rows["gpp_ratio"] < 1.0),
            }
        ).groupby([rows[k] for k in CELL_KEYS]).sum()
        frames.append(
            pd.DataFrame(
                {
                    "unit": unit,
                    "ratio": aggregated["with"] / aggregated["without"],
                    "share_negative": aggregated["negative"],
                }
            ).reset_index()
        )
    return pd.concat(frames, ignore_index=True)[CELL_KEYS + ["unit", "ratio", "share_negative"]]


def summarize(ratios: np.ndarray, share_negative: np.ndarray | None = None) -> ImpactSummary:
    """Type-7 percentiles of the percent change and impact probabilities.

    Raises:
        ValidationError: If no cells are given.
    """
    values = np.asarray(ratios, dtype=float)
    if values.size == 0:
        raise ValidationError("summarize needs at least one cell")
    change = (values - 1.0) * 100.0
    p5, p50, p95 = np.percentile(change, [5, 50, 95], method="linear")
    shares = np.asarray(share_negative, dtype=float) if share_negative is not None else np.array([])
    shares = shares[np.isfinite(shares)]
    return ImpactSummary(
        p5=float(p5),
        p50=float(p50),
        p95=float(p95),
        probability_positive=float(np.mean(values > 1.0)),
        probability_non_negative=float(np.mean(values >= 1.0)),
        share_negative=float(np.median(shares)) if shares.size else float("nan"),
        n_cells=int(values.size),
    )
