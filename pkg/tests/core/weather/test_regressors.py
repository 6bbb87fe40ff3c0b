"""Tests for regressor naming and fine-bin coarsening."""

import numpy as np
import pandas as pd
import pytest

from climpanel.errors import InvalidBinsError
from climpanel.weather.regressors import (
    RegressorSchema,
    coarsen_bins,
    format_edge,
    parse_edge,
    precip_bin_columns,
    temp_bin_columns,
    temp_bin_edges_from_columns,
)


def test_format_edge() -> None:
    """Edges render without dots or minus signs."""
    assert format_edge(13.0) == "13"
    assert format_edge(-5) == "m5"
    assert format_edge(2.5) == "2p5"
    assert parse_edge("m2p5") == -2.5


def test_temp_bin_columns() -> None:
    assert temp_bin_columns([0.0, 1.0]) == ["tbin_lt0", "tbin_0_1", "tbin_ge1"]


def test_precip_bin_columns() -> None:
    assert precip_bin_columns([0.0, 10.0]) == ["pbin_zero", "pbin_0_10", "pbin_gt10"]


def test_edges_recovered_from_header() -> None:
    columns = ["province_id", *temp_bin_columns([-5.0, 0.0, 2.5]), "precip"]
    assert temp_bin_edges_from_columns(columns) == [-5.0, 0.0, 2.5]


@pytest.mark.parametrize("edges", [[], [5.0, 5.0], [10.0, 0.0], [0.0, float("nan")]])
def test_invalid_edges(edges: list[float]) -> None:
    with pytest.raises(InvalidBinsError):
        temp_bin_columns(edges)


def test_default_schema_columns() -> None:
    columns = RegressorSchema().columns()
    assert columns[:2] == ["temp_p1", "temp_p2"]
    assert "tbin_lt0" in columns
    assert "tbin_ge45" in columns
    assert {"hdd_23", "cdd_28", "precip", "precip_sq", "pbin_zero", "pbin_gt40"} <= set(columns)
    assert len(columns) == 7 + 47 + 2 + 2 + 6


class TestCoarsenBins:
    """Summing 1 degree bins into wider bins."""

    def _fine_panel(self) -> pd.DataFrame:
        rng = np.random.default_rng(3)
        names = temp_bin_columns([float(e) for e in range(0, 46)])
        counts = rng.dirichlet(np.ones(len(names)), size=4) * 365
        return pd.DataFrame(counts, columns=names)

    def test_sums_members(self) -> None:
        panel = self._fine_panel()
        coarse = coarsen_bins(panel, [13.0, 18.0, 23.0, 28.0, 33.0, 38.0])
        assert list(coarse.columns) == [
            "tbin_lt13",
            "tbin_13_18",
            "tbin_18_23",
            "tbin_23_28",
            "tbin_28_33",
            "tbin_33_38",
            "tbin_ge38",
        ]
        expected_low = panel[["tbin_lt0", *[f"tbin_{k}_{k + 1}" for k in range(13)]]].sum(axis=1)
        np.testing.assert_allclose(coarse["tbin_lt13"], expected_low)
        expected_mid = panel[[f"tbin_{k}_{k + 1}" for k in range(23, 28)]].sum(axis=1)
        np.testing.assert_allclose(coarse["tbin_23_28"], expected_mid)
        expected_top = panel[[*[f"tbin_{k}_{k + 1}" for k in range(38, 45)], "tbin_ge45"]].sum(axis=1)
        np.testing.assert_allclose(coarse["tbin_ge38"], expected_top)

    def test_preserves_total_days(self) -> None:
        panel = self._fine_panel()
        coarse = coarsen_bins(panel, [20.0, 30.0])
        np.testing.assert_allclose(coarse.sum(axis=1), 365.0)

    def test_edge_not_in_fine_bins(self) -> None:
        with pytest.raises(InvalidBinsError):
            coarsen_bins(self._fine_panel(), [12.5, 30.0])

    def test_panel_without_bins(self) -> None:
        with pytest.raises(InvalidBinsError):
            coarsen_bins(pd.DataFrame({"temp_p1": [1.0]}), [20.0])
