"""Tests for Pydantic schema models."""

from pathlib import Path

import pytest
import yaml

from climpanel.errors import ConfigurationError, MissingDataError, NotFoundError
from climpanel.estimation import ModelSpec, fit
from climpanel.schemas.errors import ErrorResponse
from climpanel.schemas.estimation import FitResponse
from climpanel.schemas.pipeline import RunConfig, load_run_config
from climpanel.schemas.projection import ProjectRequest
from climpanel.schemas.weather import AggregateRequest
from tests.core.fixtures import make_panel

REQUIRED = {
    "grid_hourly": "grid_hourly.csv",
    "cell_weights": "cell_weights.csv",
    "population_weights": "population_weights.csv",
    "panel": "panel.csv",
    "climate_dir": "climate",
    "shares": "shares.csv",
    "seed": 7,
}


def _write_inputs(root: Path) -> None:
    for name, value in REQUIRED.items():
        if name == "climate_dir":
            (root / value).mkdir()
        elif name != "seed":
            (root / value).write_text("x\n")


class TestRunConfig:
    def test_defaults(self) -> None:
        config = RunConfig.model_validate(REQUIRED)
        assert config.draws == 1000
        assert config.growth_kinds == ["baseline"]
        assert config.out_dir == Path("out")
        assert not config.select_spec

    def test_resolve_relative_paths(self, tmp_path: Path) -> None:
        config = RunConfig.model_validate({**REQUIRED, "growth": "/abs/growth.csv"}).resolve(tmp_path)
        assert config.panel == tmp_path / "panel.csv"
        assert config.out_dir == tmp_path / "out"
        assert config.growth == Path("/abs/growth.csv")
        # optional inputs left out stay out of the input set
        assert "grid_daily" not in config.input_paths()

    def test_unknown_key_is_rejected(self) -> None:
        with pytest.raises(ValueError):
            RunConfig.model_validate({**REQUIRED, "drwas": 10})

    def test_negative_draws(self) -> None:
        with pytest.raises(ValueError):
            RunConfig.model_validate({**REQUIRED, "draws": -1})


class TestLoadRunConfig:
    def test_loads_and_resolves(self, tmp_path: Path) -> None:
        _write_inputs(tmp_path)
        path = tmp_path / "pipeline.yaml"
        path.write_text(yaml.safe_dump({**REQUIRED, "draws": 3}))
        config = load_run_config(path)
        assert config.seed == 7
        assert config.draws == 3
        assert config.climate_dir == tmp_path / "climate"

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(NotFoundError):
            load_run_config(tmp_path / "pipeline.yaml")

    def test_invalid_content(self, tmp_path: Path) -> None:
        path = tmp_path / "pipeline.yaml"
        path.write_text(yaml.safe_dump({"panel": "panel.csv"}))
        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(path)
        assert any(e.startswith("seed") for e in exc_info.value.details["errors"])

    def test_missing_input_path(self, tmp_path: Path) -> None:
        _write_inputs(tmp_path)
        (tmp_path / "shares.csv").unlink()
        path = tmp_path / "pipeline.yaml"
        path.write_text(yaml.safe_dump(REQUIRED))
        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(path)
        assert list(exc_info.value.details["missing"]) == ["shares"]


def test_error_response_from_error() -> None:
    err = MissingDataError("gap", details={"year": 2002}, suggestion="fill it")
    response = ErrorResponse.from_error(err)
    assert response.error == "MISSING_DATA"
    assert response.details == {"year": 2002}
    assert response.suggestion == "fill it"
    assert response.exit_code == 2
    assert response.stage is None


def test_aggregate_request_years() -> None:
    request = AggregateRequest(
        grid_hourly="g", cell_weights="c", population_weights="p", out="o", start_year=2000, end_year=2001
    )
    assert request.end_year == 2001
    with pytest.raises(ValueError):
        AggregateRequest(
            grid_hourly="g", cell_weights="c", population_weights="p", out="o", start_year=2001, end_year=2000
        )


def test_project_request_needs_seed() -> None:
    with pytest.raises(ValueError):
        ProjectRequest(panel="p", climate_dir="c", out="o")


def test_fit_response_from_domain() -> None:
    result = fit(ModelSpec.polynomial(2), make_panel())
    response = FitResponse.from_domain(result, {"fit": Path("out/fit.json")})
    assert response.form == "polynomial"
    assert response.n_obs == 72
    assert response.cluster_count == 6
    assert [c.name for c in response.coefficients] == ["temp_p1", "temp_p2", "precip", "precip_sq"]
    assert response.outputs == {"fit": "out/fit.json"}
    assert all(c.std_err > 0 for c in response.coefficients)
