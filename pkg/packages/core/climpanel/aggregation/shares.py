"""Population shares of provinces within the country and within regions.

shares.csv columns: ``province_id,region_id,population`` with an optional
``year`` column. With years present, each province is weighted by its
median share of national population over the share window.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from climpanel.errors import InvalidWeightsError, ValidationError
from climpanel.utils.io import read_csv

SHARE_TOL = 1e-9
REGIONS = ("upper_north", "lower_north", "northeast", "central", "east", "west", "south")


@dataclass
class PopulationShares:
    """Fixed population weight per province and the region it belongs to.

    Weights are head counts or population shares; only their ratios matter.
    """

    population: pd.Series
    regions: pd.Series

    def __post_init__(self) -> None:
        self.population = self.population.astype(float).sort_index()
        self.regions = self.regions.astype(str).reindex(self.population.index)
        if self.population.empty:
            raise ValidationError("Population shares are empty")
        if not np.all(np.isfinite(self.population)) or (self.population < 0).any():
            raise InvalidWeightsError("Population must be finite and non-negative")
        if self.population.sum() <= 0:
            raise InvalidWeightsError("Total population must be positive")
        if self.regions.isna().any():
            raise ValidationError("Every province needs a region")

    @property
    def provinces(self) -> list[str]:
        return list(self.population.index)

    def region_names(self) -> list[str]:
        return sorted(self.regions.unique())

    def members(self, region: str) -> list[str]:
        return sorted(self.regions[self.regions == region].index)

    def national(self) -> pd.Series:
        """omega_p: share of national population."""
        return self.population / self.population.sum()

    def within_region(self) -> pd.Series:
        """omega_i: share of the province's region population."""
        totals = self.population.groupby(self.regions).transform("sum")
        if (totals <= 0).any():
            raise InvalidWeightsError("A region has zero total population")
        return self.population / totals

    def validate(self) -> None:
        """Raise InvalidWeightsError if national or regional shares do not sum to one."""
        total = float(self.national().sum())
        if abs(total - 1.0) > SHARE_TOL:
            raise InvalidWeightsError(f"National shares sum to {total}", details={"sum": total})
        sums = self.within_region().groupby(self.regions).sum()
        bad = sums[(sums - 1.0).abs() > SHARE_TOL]
        if not bad.empty:
            raise InvalidWeightsError(
                f"Shares in region {bad.index[0]} sum to {float(bad.iloc[0])}",
                details={"region": str(bad.index[0]), "sum": float(bad.iloc[0])},
            )


def shares_from_frame(frame: pd.DataFrame, window: tuple[int, int] = (2003, 2022)) -> PopulationShares:
    df = frame.copy()
    df["province_id"] = df["province_id"].astype(str)
    if "year" in df.columns:
        start, end = window
        in_window = df[df["year"].between(start, end)]
        df = in_window if not in_window.empty else df
        yearly = df["population"] / df.groupby("year")["population"].transform("sum")
        # national() renormalizes the medians
        population = yearly.groupby(df["province_id"]).median()
    else:
        if df["province_id"].duplicated().any():
            raise ValidationError("shares.csv without a year column must list each province once")
        population = df.set_index("province_id")["population"]
    regions = df.groupby("province_id")["region_id"].first()
    return PopulationShares(population=population, regions=regions)


def load_shares(path: Path, window: tuple[int, int] = (2003, 2022)) -> PopulationShares:
    frame = read_csv(Path(path), ["province_id", "region_id", "population"], "Shares")
    shares = shares_from_frame(frame, window)
    shares.validate()
    return shares
