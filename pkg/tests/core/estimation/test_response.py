"""Tests for response functions and marginal warming rates."""

import numpy as np
import pytest

from climpanel.errors import ValidationError
from climpanel.estimation.alternative import fit_alternative_formulation, marginal_effects
from climpanel.estimation.fit import FitResult
from climpanel.estimation.fit import fit as fit_panel
from climpanel.estimation.response import (
    marginal_warming_rate,
    response_at,
    response_curve,
    response_vector,
)
from climpanel.estimation.spec import IncomeKind, Interaction, ModelSpec
from tests.core.fixtures import make_panel

QUADRATIC = ModelSpec.polynomial(2)


def _quadratic_fit(b1: float = 0.0494, b2: float = -0.0009, vcov: np.ndarray | None = None) -> FitResult:
    return FitResult.from_coefficients(QUADRATIC, {"temp_p1": b1, "temp_p2": b2, "precip": 0.001}, vcov)


class TestResponseAt:
    def test_published_coefficients(self) -> None:
        """0.0494*9 - 0.0009*549 at 35 degC against 26 degC."""
        result = response_at(_quadratic_fit(), QUADRATIC, 35.0, 26.0)
        assert result.effect == pytest.approx(-0.0495, abs=1e-6)
        assert result.std_err == 0.0

    def test_zero_at_reference(self) -> None:
        assert response_at(_quadratic_fit(), QUADRATIC, 26.0, 26.0).effect == 0.0

    def test_delta_method_standard_error(self) -> None:
        vcov = np.diag([1e-4, 1e-7, 0.0])
        result = response_at(_quadratic_fit(vcov=vcov), QUADRATIC, 35.0, 26.0)
        assert result.std_err == pytest.approx(np.sqrt(81 * 1e-4 + 549**2 * 1e-7))

    def test_precipitation_terms_ignored(self) -> None:
        c = response_vector(_quadratic_fit(), QUADRATIC, 30.0, 26.0)
        assert c[2] == 0.0

    def test_outside_support(self) -> None:
        with pytest.raises(ValidationError) as exc:
            response_at(_quadratic_fit(), QUADRATIC, 45.0, 26.0)
        assert exc.value.code == "OUT_OF_SUPPORT"

    def test_inverted_u(self) -> None:
        """Vertex of the published curve lies between 20 and 32 degC."""
        curve = response_curve(_quadratic_fit(), QUADRATIC, np.arange(11.0, 42.0), 26.0)
        peak = float(curve.loc[curve["effect"].idxmax(), "temperature"])
        assert 20.0 < peak < 32.0
        assert list(curve.columns) == ["group", "temperature", "effect", "std_err", "lower", "upper"]

    @pytest.mark.parametrize(("level", "z"), [(0.95, 1.959964), (0.90, 1.644854)])
    def test_band_width(self, level: float, z: float) -> None:
        vcov = np.diag([1e-4, 1e-7, 0.0])
        curve = response_curve(_quadratic_fit(vcov=vcov), QUADRATIC, [35.0], 26.0, level=level)
        row = curve.iloc[0]
        assert row["upper"] - row["effect"] == pytest.approx(z * row["std_err"], rel=1e-6)
        assert row["effect"] - row["lower"] == pytest.approx(z * row["std_err"], rel=1e-6)


class TestLags:
    SPEC = ModelSpec.polynomial(1, n_lags=2)

    def _fit(self) -> FitResult:
        return FitResult.from_coefficients(
            self.SPEC, {"temp_p1": -0.01, "temp_p1_L1": 0.004, "temp_p1_L2": 0.002}
        )

    def test_cumulative_effect(self) -> None:
        result = response_at(self._fit(), self.SPEC, 30.0, 26.0)
        assert result.effect == pytest.approx(-0.004 * 4)
        assert result.n_lags_included == 2

    def test_partial_lags(self) -> None:
        assert response_at(self._fit(), self.SPEC, 30.0, 26.0, lags=0).effect == pytest.approx(-0.04)
        assert response_at(self._fit(), self.SPEC, 30.0, 26.0, lags=1).effect == pytest.approx(-0.024)

    def test_too_many_lags(self) -> None:
        with pytest.raises(ValidationError):
            response_at(self._fit(), self.SPEC, 30.0, 26.0, lags=3)


class TestMarginalWarmingRate:
    def test_polynomial(self) -> None:
        """An effect of -0.0137 at 30 degC is -1.250 percent per degree."""
        fit = FitResult.from_coefficients(QUADRATIC, {"temp_p1": -0.0137 / 4, "temp_p2": 0.0})
        rate = marginal_warming_rate(fit, QUADRATIC, 30.0, 26.0)
        assert rate == pytest.approx(-1.250, abs=0.01)

    def test_bins(self) -> None:
        """Effect of -0.0406 in the 28-33 bin is -3.705 percent per degree."""
        spec = ModelSpec.bins()
        names = ["tbin_lt13", "tbin_13_18", "tbin_18_23", "tbin_28_33", "tbin_33_38", "tbin_ge38"]
        coefficients = {name: 0.0 for name in names}
        coefficients["tbin_28_33"] = -0.0406
        fit = FitResult.from_coefficients(spec, coefficients)
        assert response_at(fit, spec, 30.0, 26.0).effect == pytest.approx(-0.0406)
        assert marginal_warming_rate(fit, spec, 30.0, 26.0) == pytest.approx(-3.705, abs=0.01)

    def test_omitted_bin_contributes_zero(self) -> None:
        spec = ModelSpec.bins()
        names = ["tbin_lt13", "tbin_13_18", "tbin_18_23", "tbin_28_33", "tbin_33_38", "tbin_ge38"]
        fit = FitResult.from_coefficients(spec, {name: 1.0 for name in names})
        assert response_at(fit, spec, 24.0, 26.0).effect == 0.0

    def test_dropped_bin_is_not_identified(self) -> None:
        spec = ModelSpec.bins()
        names = ["tbin_lt13", "tbin_13_18", "tbin_18_23", "tbin_28_33", "tbin_33_38"]
        fit = FitResult.from_coefficients(spec, {name: 1.0 for name in names})
        with pytest.raises(ValidationError) as exc_info:
            response_at(fit, spec, 40.0, 26.0)
        assert exc_info.value.code == "BIN_NOT_IDENTIFIED"
        assert exc_info.value.details["bin"] == "tbin_ge38"
        with pytest.raises(ValidationError):
            response_at(fit, spec, 30.0, 39.0)
        assert response_at(fit, spec, 30.0, 26.0).effect == 1.0

    def test_curve_marks_dropped_bin(self) -> None:
        spec = ModelSpec.bins()
        names = ["tbin_lt13", "tbin_13_18", "tbin_18_23", "tbin_28_33", "tbin_33_38"]
        fit = FitResult.from_coefficients(spec, {name: 1.0 for name in names})
        curve = response_curve(fit, spec, [30.0, 40.0], 26.0)
        assert curve["effect"].iloc[0] == 1.0
        assert np.isnan(curve["effect"].iloc[1])

    @pytest.mark.parametrize("omitted", [0, 2, 5])
    def test_reference_bin_choice(self, omitted: int) -> None:
        """Effects against a reference temperature do not depend on the omitted bin."""
        data = make_panel(seed=2)
        spec = ModelSpec.bins(omitted_bin=3)
        other = ModelSpec.bins(omitted_bin=omitted)
        fit_ref, fit_other = fit_panel(spec, data), fit_panel(other, data)
        for temperature in (12.0, 20.0, 30.0, 35.0, 40.0):
            a = response_at(fit_ref, spec, temperature, 26.0)
            b = response_at(fit_other, other, temperature, 26.0)
            assert b.effect == pytest.approx(a.effect, abs=1e-9)
            assert b.std_err == pytest.approx(a.std_err, rel=1e-6)

    def test_degree_days(self) -> None:
        spec = ModelSpec.degree_days()
        fit = FitResult.from_coefficients(spec, {"hdd_23": 0.01, "cdd_28": -0.02})
        assert response_at(fit, spec, 31.0, 26.0).effect == pytest.approx(-0.06)
        assert response_at(fit, spec, 20.0, 26.0).effect == pytest.approx(0.03)

    def test_reference_equal_to_eval(self) -> None:
        with pytest.raises(ValidationError):
            marginal_warming_rate(_quadratic_fit(), QUADRATIC, 26.0, 26.0)


class TestInteractedResponse:
    SPEC = ModelSpec.polynomial(1, interaction=Interaction.LOW_INCOME)

    def _fit(self) -> FitResult:
        return FitResult.from_coefficients(self.SPEC, {"temp_p1_low": -0.02, "temp_p1_high": 0.01})

    def test_group_effects(self) -> None:
        assert response_at(self._fit(), self.SPEC, 30.0, 26.0, group="low").effect == pytest.approx(-0.08)
        assert response_at(self._fit(), self.SPEC, 30.0, 26.0, group="high").effect == pytest.approx(0.04)

    def test_group_required(self) -> None:
        with pytest.raises(ValidationError):
            response_at(self._fit(), self.SPEC, 30.0, 26.0)

    def test_curve_has_both_groups(self) -> None:
        curve = response_curve(self._fit(), self.SPEC, [25.0, 30.0], 26.0)
        assert sorted(curve["group"].unique()) == ["high", "low"]
        assert len(curve) == 4


class TestAlternativeFormulation:
    def test_marginal_effects(self) -> None:
        spec = ModelSpec.interacted_average()
        fit = FitResult.from_coefficients(spec, {"temp_p1": 0.1, "temp_p1_x_tbar": -0.005})
        effects = marginal_effects(fit)
        assert list(effects["t_bar"]) == [15.0, 20.0, 25.0, 30.0, 35.0, 40.0]
        assert effects.set_index("t_bar").loc[40.0, "effect"] == pytest.approx(-0.1)

    def test_flat_without_interaction(self) -> None:
        spec = ModelSpec.interacted_average()
        fit = FitResult.from_coefficients(spec, {"temp_p1": 0.03, "temp_p1_x_tbar": 0.0})
        np.testing.assert_allclose(marginal_effects(fit)["effect"], 0.03)

    def test_fit_columns(self) -> None:
        result = fit_alternative_formulation(make_panel(), IncomeKind.LEVEL)
        assert result.fit.coef_names == (
            "temp_p1",
            "temp_p1_x_tbar",
            "temp_p1_x_income",
            "precip",
            "precip_x_rbar",
            "precip_x_income",
        )
        assert len(result.marginal_effects) == 6
        assert set(result.fit.province_means) == {"tbar", "rbar"}

    def test_response_not_defined(self) -> None:
        spec = ModelSpec.interacted_average()
        fit = FitResult.from_coefficients(spec, {"temp_p1": 0.1, "temp_p1_x_tbar": -0.005})
        with pytest.raises(ValidationError):
            response_at(fit, spec, 30.0, 26.0)
