"""Cell-to-polygon coverage weights and polygon-to-province population weights.

Expected files:
    cell weights:        polygon_id,cell_id,w_cj
    population weights:  province_id,polygon_id,year_from,year_to,w_jp

A province-year combines both levels into one weight per cell:
w_c = sum_j w_jp * w_cj.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from climpanel.errors import InvalidWeightsError
from climpanel.utils.io import read_csv

WEIGHT_TOL = 1e-9
FIRST_YEAR = 1900
LAST_YEAR = 2100
CELL_WEIGHT_COLUMNS = ["polygon_id", "cell_id", "w_cj"]
POPULATION_WEIGHT_COLUMNS = ["province_id", "polygon_id", "year_from", "year_to", "w_jp"]


@dataclass(frozen=True)
class PopulationWeight:
    polygon_id: str
    weight: float
    year_from: int
    year_to: int

    def covers(self, year: int) -> bool:
        return self.year_from <= year <= self.year_to


@dataclass
class WeightMap:
    """Two-level weighting from grid cells to provinces."""

    cell_weights: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    population_weights: dict[str, list[PopulationWeight]] = field(default_factory=dict)

    def provinces(self) -> list[str]:
        return sorted(self.population_weights)

    def polygon_weights(self, province_id: str, year: int) -> list[PopulationWeight]:
        """Population weights in effect for a province-year.

        Years before the earliest range reuse the earliest range; years after
        the latest reuse the latest.
        """
        entries = self.population_weights.get(province_id)
        if not entries:
            raise InvalidWeightsError(
                f"Province {province_id} has no population weights",
                details={"province": province_id},
            )
        active = [e for e in entries if e.covers(year)]
        if active:
            return active
        first = min(e.year_from for e in entries)
        last = max(e.year_to for e in entries)
        if year < first:
            return [e for e in entries if e.year_from == first]
        if year > last:
            return [e for e in entries if e.year_to == last]
        raise InvalidWeightsError(
            f"Province {province_id} has no population weights covering {year}",
            details={"province": province_id, "year": year},
        )

    def cell_weights_for(self, province_id: str, year: int) -> tuple[list[str], np.ndarray]:
        """Combined per-cell weights for a province-year."""
        combined: dict[str, float] = {}
        for entry in self.polygon_weights(province_id, year):
            cells = self.cell_weights.get(entry.polygon_id)
            if not cells:
                raise InvalidWeightsError(
                    f"Polygon {entry.polygon_id} has no cell weights",
                    details={"polygon": entry.polygon_id, "province": province_id},
                )
            for cell_id, w_cj in cells:
                combined[cell_id] = combined.get(cell_id, 0.0) + entry.weight * w_cj
        cell_ids = [c for c, w in combined.items() if w > 0.0]
        return cell_ids, np.array([combined[c] for c in cell_ids], dtype=np.longdouble)

    def validate(self) -> None:
        """Check ranges and normalization of both weight levels.

        Raises:
            InvalidWeightsError: Naming the first offending polygon or province.
        """
        for polygon_id, cells in self.cell_weights.items():
            weights = np.array([w for _, w in cells], dtype=float)
            if np.any((weights < 0) | (weights > 1)) or not np.all(np.isfinite(weights)):
                raise InvalidWeightsError(
                    f"Cell weights for polygon {polygon_id} must lie in [0, 1]",
                    details={"polygon": polygon_id},
                )
            total = float(np.sum(weights, dtype=np.longdouble))
            if abs(total - 1.0) > WEIGHT_TOL:
                raise InvalidWeightsError(
                    f"Cell weights for polygon {polygon_id} sum to {total:.12g}, expected 1",
                    details={"polygon": polygon_id, "sum": total},
                    suggestion="Normalize w_cj so that each polygon's weights add up to one",
                )

        for province_id, entries in self.population_weights.items():
            for entry in entries:
                if not 0.0 <= entry.weight <= 1.0:
                    raise InvalidWeightsError(
                        f"Population weight for {province_id}/{entry.polygon_id} must lie in [0, 1]",
                        details={"province": province_id, "polygon": entry.polygon_id},
                    )
                if entry.polygon_id not in self.cell_weights:
                    raise InvalidWeightsError(
                        f"Province {province_id} references unknown polygon {entry.polygon_id}",
                        details={"province": province_id, "polygon": entry.polygon_id},
                    )
            # active set only changes at range boundaries
            checkpoints = sorted({e.year_from for e in entries} | {e.year_to for e in entries})
            for year in checkpoints:
                active = [e.weight for e in entries if e.covers(year)]
                total = float(np.sum(active, dtype=np.longdouble))
                if abs(total - 1.0) > WEIGHT_TOL:
                    raise InvalidWeightsError(
                        f"Population weights for province {province_id} in {year} sum to "
                        f"{total:.12g}, expected 1",
                        details={"province": province_id, "year": year, "sum": total},
                        suggestion="Normalize w_jp within each province and year range",
                    )


def population_weights_from_counts(counts: pd.DataFrame) -> dict[str, list[PopulationWeight]]:
    """Normalize raw polygon populations into w_jp.

    Args:
        counts: Columns province_id, polygon_id, year, population.

    Returns:
        Population weights per province. Each count year holds until the next
        one; the earliest extends back to FIRST_YEAR and the latest forward
        to LAST_YEAR.
    """
    result: dict[str, list[PopulationWeight]] = {}
    for province_id, group in counts.groupby("province_id", sort=True):
        years = sorted(int(y) for y in group["year"].unique())
        entries: list[PopulationWeight] = []
        for year, rows in group.groupby("year", sort=True):
            total = float(rows["population"].sum())
            if total <= 0:
                raise InvalidWeightsError(
                    f"Province {province_id} has no population in {year}",
                    details={"province": province_id, "year": int(year)},
                )
            position = years.index(int(year))
            year_from = FIRST_YEAR if position == 0 else int(year)
            year_to = LAST_YEAR if position == len(years) - 1 else years[position + 1] - 1
            entries.extend(
                PopulationWeight(str(row.polygon_id), float(row.population) / total, year_from, year_to)
                for row in rows.itertuples()
            )
        result[str(province_id)] = entries
    return result


def _cell_weights(frame: pd.DataFrame) -> dict[str, list[tuple[str, float]]]:
    out: dict[str, list[tuple[str, float]]] = {}
    for row in frame.itertuples():
        out.setdefault(str(row.polygon_id), []).append((str(row.cell_id), float(row.w_cj)))
    return out


def _population_weights(frame: pd.DataFrame) -> dict[str, list[PopulationWeight]]:
    out: dict[str, list[PopulationWeight]] = {}
    for row in frame.itertuples():
        out.setdefault(str(row.province_id), []).append(
            PopulationWeight(str(row.polygon_id), float(row.w_jp), int(row.year_from), int(row.year_to))
        )
    return out


def weight_map_from_frames(cells: pd.DataFrame, population: pd.DataFrame) -> WeightMap:
    weights = WeightMap(cell_weights=_cell_weights(cells), population_weights=_population_weights(population))
    weights.validate()
    return weights


def load_weight_map(cell_path: Path, population_path: Path) -> WeightMap:
    """Load and validate both weight files."""
    cells = read_csv(cell_path, CELL_WEIGHT_COLUMNS, "Cell weights")
    population = read_csv(population_path, POPULATION_WEIGHT_COLUMNS, "Population weights")
    return weight_map_from_frames(cells, population)


def weights_to_frames(weights: WeightMap) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Inverse of weight_map_from_frames, used when writing fixtures."""
    cells = pd.DataFrame(
        [(p, c, w) for p, items in weights.cell_weights.items() for c, w in items],
        columns=CELL_WEIGHT_COLUMNS,
    )
    population = pd.DataFrame(
        [
            (prov, e.polygon_id, e.year_from, e.year_to, e.weight)
            for prov, entries in weights.population_weights.items()
            for e in entries
        ],
        columns=POPULATION_WEIGHT_COLUMNS,
    )
    return cells, population

