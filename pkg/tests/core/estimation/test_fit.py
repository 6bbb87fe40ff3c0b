"""Tests for fixed-effects estimation."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from climpanel.errors import (
    CollinearDesignError,
    ConvergenceFailure,
    DegenerateClusteringError,
    NotFoundError,
    TooFewObservationsError,
    ValidationError,
)
from climpanel.estimation.absorb import absorb_fixed_effects, demean, recover_fixed_effects
from climpanel.estimation.covariance import cluster_robust_vcov, small_sample_factor
from climpanel.estimation.design import build_design
from climpanel.estimation.fit import FitResult, fit, fit_interacted, load_fit, save_fit
from climpanel.estimation.panel import PanelDataset
from climpanel.estimation.spec import Interaction, ModelSpec, PrecipControl
from climpanel.utils.config import EstimationDefaults
from tests.core.fixtures import make_panel, make_panel_frame


def _dummy_ols(frame: pd.DataFrame, columns: list[str]) -> np.ndarray:
    """OLS with explicit province and year dummies (first year dropped)."""
    provinces = pd.get_dummies(frame["province_id"], dtype=float)
    years = pd.get_dummies(frame["year"], dtype=float).iloc[:, 1:]
    Z = np.column_stack([frame[columns].to_numpy(dtype=float), provinces.to_numpy(), years.to_numpy()])
    beta, *_ = np.linalg.lstsq(Z, frame["growth"].to_numpy(dtype=float), rcond=None)
    return beta[: len(columns)]


class TestDummyEquivalence:
    """Absorbed fixed effects reproduce the full dummy regression."""

    def test_balanced_panel(self) -> None:
        data = make_panel()
        result = fit(ModelSpec.polynomial(2), data)
        expected = _dummy_ols(data.frame, ["temp_p1", "temp_p2", "precip", "precip_sq"])
        np.testing.assert_allclose(result.coefficients, expected, rtol=0, atol=1e-8)

    def test_unbalanced_panel(self) -> None:
        frame = make_panel_frame(seed=4)
        frame = frame.drop(index=[3, 17, 40, 41]).reset_index(drop=True)
        data = PanelDataset.from_frame(frame)
        result = fit(ModelSpec.polynomial(2), data)
        expected = _dummy_ols(data.frame, ["temp_p1", "temp_p2", "precip", "precip_sq"])
        np.testing.assert_allclose(result.coefficients, expected, rtol=0, atol=1e-6)

    @pytest.mark.parametrize("seed", range(100))
    def test_random_panels(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        frame = make_panel_frame(
            n_provinces=int(rng.integers(3, 9)), n_years=int(rng.integers(5, 21)), seed=seed, noise=1.0
        )
        data = PanelDataset.from_frame(frame)
        result = fit(ModelSpec.polynomial(2), data)
        expected = _dummy_ols(data.frame, ["temp_p1", "temp_p2", "precip", "precip_sq"])
        np.testing.assert_allclose(result.coefficients, expected, rtol=0, atol=1e-8)


class TestScaleEquivariance:
    @pytest.mark.parametrize("scale", [0.01, 3.0, 250.0])
    def test_outcome_scale(self, scale: float) -> None:
        frame = make_panel_frame(seed=9)
        base = fit(ModelSpec.polynomial(2), PanelDataset.from_frame(frame))
        scaled = fit(ModelSpec.polynomial(2), PanelDataset.from_frame(frame.assign(growth=frame["growth"] * scale)))
        np.testing.assert_allclose(scaled.coefficients, base.coefficients * scale, rtol=1e-9)
        np.testing.assert_allclose(scaled.std_errors, base.std_errors * scale, rtol=1e-9)
        np.testing.assert_allclose(
            scaled.params / scaled.std_errors, base.params / base.std_errors, rtol=1e-9
        )

    def test_recovers_truth_without_noise(self) -> None:
        data = make_panel(noise=0.0)
        result = fit(ModelSpec.polynomial(2), data)
        assert result.coef("temp_p1") == pytest.approx(0.5, abs=1e-8)
        assert result.coef("temp_p2") == pytest.approx(-0.2, abs=1e-8)
        assert result.coef("precip") == pytest.approx(0.1, abs=1e-8)
        assert result.within_r2 == pytest.approx(1.0)

    def test_fixed_effects_reproduce_fitted_values(self) -> None:
        data = make_panel()
        result = fit(ModelSpec.polynomial(2), data)
        frame = data.frame
        fitted = (
            frame[list(result.coef_names)].to_numpy() @ result.coefficients
            + frame["province_id"].map(result.fixed_effects["province"]).to_numpy()
            + frame["year"].astype(str).map(result.fixed_effects["year"]).to_numpy()
        )
        residuals = frame["growth"].to_numpy() - fitted
        np.testing.assert_allclose(residuals, result.residuals.to_numpy(), atol=1e-8)


class TestAbsorption:
    def test_single_factor_is_one_sweep(self) -> None:
        codes = np.array([0, 0, 1, 1, 1])
        out, sweeps = demean(np.array([1.0, 3.0, 2.0, 4.0, 6.0]), [codes])
        assert sweeps == 1
        np.testing.assert_allclose(out[:, 0], [-1.0, 1.0, -2.0, 0.0, 2.0])

    def test_group_means_vanish(self) -> None:
        rng = np.random.default_rng(1)
        a = rng.integers(0, 5, size=60)
        b = rng.integers(0, 7, size=60)
        a[:5], b[:7] = np.arange(5), np.arange(7)
        system = absorb_fixed_effects(rng.normal(size=(60, 2)), rng.normal(size=60), [a, b])
        for codes in (a, b):
            sums = np.bincount(codes, weights=system.y)
            np.testing.assert_allclose(sums, 0.0, atol=1e-8)

    def test_convergence_failure(self) -> None:
        rng = np.random.default_rng(2)
        a = np.repeat(np.arange(6), 5)
        b = np.tile(np.arange(5), 6)
        keep = np.ones(30, dtype=bool)
        keep[[7, 13, 22]] = False
        with pytest.raises(ConvergenceFailure):
            demean(rng.normal(size=int(keep.sum())), [a[keep], b[keep]], tol=1e-300, max_sweeps=2)

    def test_recover_effects_single_factor(self) -> None:
        codes = np.array([0, 0, 1, 1])
        (effects,) = recover_fixed_effects(np.array([1.0, 3.0, 5.0, 7.0]), [codes])
        np.testing.assert_allclose(effects, [2.0, 6.0])


class TestClusterCovariance:
    def test_matches_naive_sandwich(self) -> None:
        """Three clusters against a loop over clusters."""
        rng = np.random.default_rng(5)
        X = rng.normal(size=(15, 2))
        e = rng.normal(size=15)
        clusters = np.repeat(["a", "b", "c"], 5)

        bread = np.linalg.inv(X.T @ X)
        meat = np.zeros((2, 2))
        for g in ("a", "b", "c"):
            s = X[clusters == g].T @ e[clusters == g]
            meat += np.outer(s, s)
        expected = (3 / 2) * (14 / 13) * bread @ meat @ bread

        result = cluster_robust_vcov(X, e, clusters)
        np.testing.assert_allclose(result, expected, rtol=0, atol=1e-10)
        np.testing.assert_array_equal(result, result.T)

    def test_single_cluster(self) -> None:
        with pytest.raises(DegenerateClusteringError):
            cluster_robust_vcov(np.ones((4, 1)), np.ones(4), np.zeros(4))

    def test_small_sample_factor(self) -> None:
        assert small_sample_factor(100, 4, 10) == pytest.approx(10 / 9 * 99 / 96)
        with pytest.raises(TooFewObservationsError):
            small_sample_factor(4, 4, 2)

    def test_fit_reports_cluster_count(self) -> None:
        result = fit(ModelSpec.polynomial(2), make_panel())
        assert result.cluster_count == 6
        assert np.all(np.diag(result.vcov) > 0)


class TestFailures:
    def test_collinear_columns_are_named(self) -> None:
        frame = make_panel_frame()
        frame["temp_p2"] = 2.0 * frame["temp_p1"]
        with pytest.raises(CollinearDesignError) as exc:
            fit(ModelSpec.polynomial(2), PanelDataset.from_frame(frame))
        assert exc.value.details["columns"] == ["temp_p2"]

    def test_province_constant_regressor_is_absorbed(self) -> None:
        frame = make_panel_frame()
        frame["precip"] = frame["province_id"].str[1:].astype(float)
        with pytest.raises(CollinearDesignError) as exc:
            fit(ModelSpec.polynomial(2), PanelDataset.from_frame(frame))
        assert "precip" in exc.value.details["columns"]

    def test_single_province(self) -> None:
        data = make_panel(n_provinces=2).filter_provinces(["P00"])
        spec = ModelSpec.polynomial(2, fixed_effects=())
        with pytest.raises(DegenerateClusteringError):
            fit(spec, data)

    def test_too_few_rows(self) -> None:
        data = make_panel(n_provinces=2, n_years=3)
        with pytest.raises(TooFewObservationsError):
            fit(ModelSpec.polynomial(2, n_lags=2), data)


class TestInteracted:
    def test_separate_group_coefficients(self) -> None:
        data = make_panel()
        result = fit_interacted(ModelSpec.polynomial(2, interaction=Interaction.LOW_INCOME), data)
        assert result.coef_names[:4] == ("temp_p1_low", "temp_p1_high", "temp_p2_low", "temp_p2_high")
        assert result.coef("temp_p1_low") == pytest.approx(0.5, abs=0.2)
        assert result.coef("temp_p1_high") == pytest.approx(0.5, abs=0.2)

    def test_needs_interaction(self) -> None:
        with pytest.raises(ValidationError):
            fit_interacted(ModelSpec.polynomial(2), make_panel())

    def test_single_province_group(self) -> None:
        frame = make_panel_frame(n_provinces=3)
        frame["low_income"] = frame["province_id"] == "P00"
        spec = ModelSpec.polynomial(2, interaction=Interaction.LOW_INCOME)
        with pytest.raises(DegenerateClusteringError):
            fit(spec, PanelDataset.from_frame(frame))


def test_fit_round_trip(tmp_path: Path) -> None:
    """A stored fit reloads with identical coefficients and covariance."""
    result = fit(ModelSpec.polynomial(2, precip_control=PrecipControl.NONE), make_panel())
    save_fit(result, tmp_path / "fit.json")
    loaded = load_fit(tmp_path / "fit.json")
    assert loaded.coef_names == result.coef_names
    np.testing.assert_array_equal(loaded.coefficients, result.coefficients)
    np.testing.assert_array_equal(loaded.vcov, result.vcov)
    assert loaded.spec == result.spec


def test_load_missing_fit(tmp_path: Path) -> None:
    with pytest.raises(NotFoundError):
        load_fit(tmp_path / "fit.json")


def test_coefficient_table() -> None:
    result = FitResult.from_coefficients(
        ModelSpec.polynomial(2), {"temp_p1": 0.2, "temp_p2": -0.01}, np.diag([0.01, 0.0001])
    )
    table = result.coefficient_table()
    assert list(table.columns) == ["coef", "std_err", "t_stat"]
    assert table.loc["temp_p1", "t_stat"] == pytest.approx(2.0)
    assert table.loc["temp_p2", "std_err"] == pytest.approx(0.01)


def test_design_uses_defaults() -> None:
    data = make_panel()
    design = build_design(ModelSpec.polynomial(2), data)
    assert design.columns == ["temp_p1", "temp_p2", "precip", "precip_sq"]
    result = fit(ModelSpec.polynomial(2), data, EstimationDefaults(absorb_tol=1e-12))
    assert result.n_obs == design.n_obs == 72
