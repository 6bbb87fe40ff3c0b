"""Tests for no-climate-change growth paths."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from climpanel.errors import MissingBaselineError, OutOfRangeError, ValidationError
from climpanel.estimation.panel import PanelDataset
from climpanel.projection.growth import (
    GrowthScenario,
    baseline_growth,
    build_growth_scenarios,
    estimate_linkage,
    load_growth_paths,
    national_growth,
    ssp_annual_growth,
)
from tests.core.fixtures import make_panel, make_panel_frame

DOUBLING = pd.Series([100.0, 200.0, 200.0], index=[2020, 2025, 2030])


class TestSspAnnualGrowth:
    def test_doubling_over_five_years(self) -> None:
        assert ssp_annual_growth(DOUBLING, 2022) == pytest.approx(2 ** 0.2 - 1)
        assert ssp_annual_growth(DOUBLING, 2022) == pytest.approx(0.1487, abs=1e-4)

    def test_block_boundaries(self) -> None:
        assert ssp_annual_growth(DOUBLING, 2024) == pytest.approx(2 ** 0.2 - 1)
        assert ssp_annual_growth(DOUBLING, 2025) == 0.0
        # last point belongs to the final block
        assert ssp_annual_growth(DOUBLING, 2030) == 0.0

    def test_outside_path(self) -> None:
        with pytest.raises(OutOfRangeError):
            ssp_annual_growth(DOUBLING, 2031)
        with pytest.raises(OutOfRangeError):
            ssp_annual_growth(DOUBLING, 2019)


class TestGrowthScenario:
    def test_baseline_is_constant(self) -> None:
        scenario = GrowthScenario(kind="baseline", baseline={"A": 2.5, "B": -1.0})
        rates = scenario.rates(["B", "A"], [2023, 2024, 2025])
        np.testing.assert_array_equal(rates, [[-1.0, -1.0, -1.0], [2.5, 2.5, 2.5]])

    def test_baseline_missing_province(self) -> None:
        with pytest.raises(MissingBaselineError):
            GrowthScenario(kind="baseline", baseline={"A": 1.0}).rates(["B"], [2023])

    def test_ssp_uses_previous_year(self) -> None:
        scenario = GrowthScenario(kind="ssp3", path=DOUBLING, linkage={"A": (0.5, 1.0)})
        rates = scenario.rates(["A"], [2025, 2026])
        assert rates[0, 0] == pytest.approx(0.5 + 100.0 * (2 ** 0.2 - 1))
        assert rates[0, 1] == pytest.approx(0.5)

    def test_ssp_needs_path(self) -> None:
        with pytest.raises(ValidationError):
            GrowthScenario(kind="ssp5").rates(["A"], [2030])


class TestLinkage:
    def _linked_panel(self) -> tuple[PanelDataset, pd.Series]:
        frame = make_panel_frame(n_provinces=3, n_years=12)
        national = pd.Series(np.random.default_rng(4).normal(3.0, 1.0, 13), index=range(1999, 2012))
        params = {"P00": (1.0, 0.5), "P01": (-0.5, 1.2), "P02": (0.0, 2.0)}
        frame["growth"] = [
            params[p][0] + params[p][1] * national[y - 1]
            for p, y in zip(frame["province_id"], frame["year"])
        ]
        return PanelDataset.from_frame(frame), national

    def test_recovers_exact_linkage(self) -> None:
        panel, national = self._linked_panel()
        linkage = estimate_linkage(panel, national, window=(2000, 2011))
        assert linkage["P01"] == pytest.approx((-0.5, 1.2))
        assert linkage["P02"] == pytest.approx((0.0, 2.0), abs=1e-9)

    def test_flat_national_falls_back_to_mean(self) -> None:
        panel = make_panel(n_provinces=2)
        national = pd.Series(2.0, index=range(1999, 2012))
        linkage = estimate_linkage(panel, national, window=(2000, 2011))
        own = panel.frame[panel.frame["province_id"] == "P00"]["growth"]
        assert linkage["P00"] == pytest.approx((own.mean(), 0.0))

    def test_national_growth(self) -> None:
        panel = make_panel(n_provinces=3)
        plain = national_growth(panel)
        assert plain.loc[2000] == pytest.approx(panel.frame[panel.frame["year"] == 2000]["growth"].mean())
        weighted = national_growth(panel, {"P01": 1.0})
        own = panel.frame[panel.frame["province_id"] == "P01"].set_index("year")["growth"]
        np.testing.assert_allclose(weighted.to_numpy(), own.sort_index().to_numpy())


class TestBaselineGrowth:
    def test_window_mean(self) -> None:
        panel = make_panel()
        rows = panel.frame[(panel.frame["province_id"] == "P02") & (panel.frame["year"] >= 2005)]
        assert baseline_growth(panel, "P02", (2005, 2011)) == pytest.approx(rows["growth"].mean())

    def test_empty_window(self) -> None:
        with pytest.raises(MissingBaselineError):
            baseline_growth(make_panel(), "P02", (1980, 1990))

    def test_build_scenarios(self) -> None:
        panel = make_panel()
        paths = {"ssp3": DOUBLING}
        scenarios = build_growth_scenarios(panel, ["baseline", "ssp3"], paths, window=(2000, 2011))
        assert [s.kind for s in scenarios] == ["baseline", "ssp3"]
        assert set(scenarios[1].linkage) == set(panel.provinces)

    def test_unknown_kind(self) -> None:
        with pytest.raises(ValidationError):
            build_growth_scenarios(make_panel(), ["ssp9"], window=(2000, 2011))

    def test_missing_path(self) -> None:
        with pytest.raises(ValidationError):
            build_growth_scenarios(make_panel(), ["ssp5"], {"ssp3": DOUBLING}, window=(2000, 2011))


class TestLoadGrowthPaths:
    def test_load(self, tmp_path: Path) -> None:
        path = tmp_path / "growth.csv"
        path.write_text("scenario,year,gdp_pc\nSSP3,2025,200\nSSP3,2020,100\nssp5,2020,100\nssp5,2025,150\n")
        paths = load_growth_paths(path)
        assert sorted(paths) == ["ssp3", "ssp5"]
        assert list(paths["ssp3"].index) == [2020, 2025]

    def test_non_positive(self, tmp_path: Path) -> None:
        path = tmp_path / "growth.csv"
        path.write_text("scenario,year,gdp_pc\nssp3,2020,100\nssp3,2025,0\n")
        with pytest.raises(ValidationError):
            load_growth_paths(path)
