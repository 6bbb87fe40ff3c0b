"""Annual regressor schema: column names, bin labels and fine-bin coarsening."""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from climpanel.errors import InvalidBinsError

PRECIP = "precip"
PRECIP_SQ = "precip_sq"
TEMP_BIN_PREFIX = "tbin"
PRECIP_BIN_PREFIX = "pbin"

_BIN_RE = re.compile(r"^tbin_(?:(lt|ge)([0-9mp]+)|([0-9mp]+)_([0-9mp]+))$")


def format_edge(edge: float) -> str:
    """Render an edge for use in a column name (-5 -> m5, 2.5 -> 2p5)."""
    value = float(edge)
    text = str(int(value)) if value.is_integer() else repr(value)
    return text.replace("-", "m").replace(".", "p")


def parse_edge(text: str) -> float:
    return float(text.replace("m", "-").replace("p", "."))


def poly_column(order: int) -> str:
    return f"temp_p{order}"


def hdd_column(threshold: float) -> str:
    return f"hdd_{format_edge(threshold)}"


def cdd_column(threshold: float) -> str:
    return f"cdd_{format_edge(threshold)}"


def check_edges(edges: Sequence[float], kind: str = "temperature") -> np.ndarray:
    """Validate bin edges are non-empty, finite and strictly ascending."""
    arr = np.asarray(list(edges), dtype=float)
    if arr.size == 0:
        raise InvalidBinsError(f"Empty {kind} bin edge list", details={"edges": []})
    if not np.all(np.isfinite(arr)) or np.any(np.diff(arr) <= 0):
        raise InvalidBinsError(
            f"{kind.capitalize()} bin edges must be finite and strictly ascending",
            details={"edges": arr.tolist()},
        )
    return arr


def temp_bin_columns(edges: Sequence[float]) -> list[str]:
    """Column names for bins [-inf, e0), [e0, e1), ..., [eN, inf)."""
    arr = check_edges(edges)
    names = [f"{TEMP_BIN_PREFIX}_lt{format_edge(arr[0])}"]
    names += [
        f"{TEMP_BIN_PREFIX}_{format_edge(lo)}_{format_edge(hi)}"
        for lo, hi in zip(arr[:-1], arr[1:], strict=True)
    ]
    names.append(f"{TEMP_BIN_PREFIX}_ge{format_edge(arr[-1])}")
    return names


def precip_bin_columns(edges: Sequence[float]) -> list[str]:
    """Column names for rainfall bins: zero, (e0, e1], ..., > eN."""
    arr = check_edges(edges, kind="precipitation")
    names = [f"{PRECIP_BIN_PREFIX}_zero"]
    names += [
        f"{PRECIP_BIN_PREFIX}_{format_edge(lo)}_{format_edge(hi)}"
        for lo, hi in zip(arr[:-1], arr[1:], strict=True)
    ]
    names.append(f"{PRECIP_BIN_PREFIX}_gt{format_edge(arr[-1])}")
    return names


def temp_bin_edges_from_columns(columns: Sequence[str]) -> list[float]:
    """Recover the temperature bin edges encoded in a panel header."""
    edges: set[float] = set()
    for col in columns:
        match = _BIN_RE.match(col)
        if not match:
            continue
        if match.group(1):
            edges.add(parse_edge(match.group(2)))
        else:
            edges.add(parse_edge(match.group(3)))
            edges.add(parse_edge(match.group(4)))
    return sorted(edges)


def precip_bin_columns_in(columns: Sequence[str]) -> list[str]:
    return [c for c in columns if c.startswith(f"{PRECIP_BIN_PREFIX}_")]


def coarsen_bins(panel: pd.DataFrame, edges: Sequence[float]) -> pd.DataFrame:
    """Sum fine temperature-bin columns into the bins defined by ``edges``.

    Every coarse edge must also be a fine edge. Returns a frame with one
    column per coarse bin, named by temp_bin_columns(edges), aligned to
    ``panel``'s index.

    Raises:
        InvalidBinsError: If edges are invalid or not a subset of the panel's edges.
    """
    coarse = check_edges(edges)
    fine = temp_bin_edges_from_columns(list(panel.columns))
    if not fine:
        raise InvalidBinsError(
            "Panel has no temperature bin columns",
            suggestion="Run 'climpanel aggregate' with temperature bin edges",
        )
    fine_names = temp_bin_columns(fine)
    missing = [e for e in coarse if not np.any(np.isclose(fine, e, rtol=0.0, atol=1e-9))]
    if missing:
        raise InvalidBinsError(
            f"Bin edges {missing} are not available in the panel's fine bins",
            details={"requested": coarse.tolist(), "available": fine},
        )

    # fine bin k covers [fine[k-1], fine[k]); bin 0 is open below
    fine_arr = np.asarray(fine)
    fine_upper = np.append(fine_arr, np.inf)
    assignment = np.searchsorted(coarse, fine_upper, side="left")
    assignment = np.where(np.isinf(fine_upper), coarse.size, assignment)

    out = pd.DataFrame(index=panel.index)
    for idx, name in enumerate(temp_bin_columns(coarse)):
        members = [fine_names[k] for k in range(len(fine_names)) if assignment[k] == idx]
        out[name] = panel[members].sum(axis=1) if members else 0.0
    return out


@dataclass
class RegressorSchema:
    """Which annual regressors the aggregate step emits."""

    max_order: int = 7
    temp_bin_edges: list[float] = field(default_factory=lambda: [float(e) for e in range(0, 46)])
    degree_day_thresholds: list[tuple[float, float]] = field(default_factory=lambda: [(23.0, 28.0)])
    precip_bin_edges: list[float] = field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0])

    def columns(self) -> list[str]:
        cols = [poly_column(m) for m in range(1, self.max_order + 1)]
        cols += temp_bin_columns(self.temp_bin_edges)
        for thr_h, thr_c in self.degree_day_thresholds:
            cols += [hdd_column(thr_h), cdd_column(thr_c)]
        cols += [PRECIP, PRECIP_SQ]
        cols += precip_bin_columns(self.precip_bin_edges)
        return list(dict.fromkeys(cols))


@dataclass
class AnnualRegressorSet:
    """Province-year regressors derived from hourly temperature and daily rainfall."""

    province_id: str
    year: int
    poly_terms: list[float]
    bin_days: list[float]
    hdd: dict[float, float]
    cdd: dict[float, float]
    precip_linear: float
    precip_sq: float
    precip_bin_days: list[float]

    def to_row(self, schema: RegressorSchema) -> dict[str, object]:
        row: dict[str, object] = {"province_id": self.province_id, "year": self.year}
        for order, value in enumerate(self.poly_terms, start=1):
            row[poly_column(order)] = value
        row.update(zip(temp_bin_columns(schema.temp_bin_edges), self.bin_days, strict=True))
        for thr, value in self.hdd.items():
            row[hdd_column(thr)] = value
        for thr, value in self.cdd.items():
            row[cdd_column(thr)] = value
        row[PRECIP] = self.precip_linear
        row[PRECIP_SQ] = self.precip_sq
        row.update(
            zip(precip_bin_columns(schema.precip_bin_edges), self.precip_bin_days, strict=True)
        )
        return row
