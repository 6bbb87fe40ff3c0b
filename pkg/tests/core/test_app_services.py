"""Tests for the app service layer."""

import json
from pathlib import Path

import pandas as pd
import pytest
import yaml

from climpanel.app import resolve_spec
from climpanel.app.datasets import run_synth, run_validate
from climpanel.app.estimation import run_fit
from climpanel.app.pipeline import run_pipeline
from climpanel.app.projection import run_projection
from climpanel.app.reports import run_report
from climpanel.app.selection import run_select
from climpanel.app.weather import run_aggregate
from climpanel.errors import EXIT_CONFIG, ConfigurationError, StageError, ValidationError
from climpanel.estimation.spec import FormKind, Interaction
from climpanel.schemas.datasets import SynthRequest, ValidateRequest
from climpanel.schemas.estimation import FitRequest
from climpanel.schemas.pipeline import PipelineRequest
from climpanel.schemas.projection import ProjectRequest
from climpanel.schemas.reports import ReportRequest
from climpanel.schemas.selection import SelectRequest
from climpanel.schemas.weather import AggregateRequest
from climpanel.synthetic import SyntheticSpec, generate_synthetic
from climpanel.utils.config import Config
from tests.core.fixtures import make_panel_frame


@pytest.fixture
def config(tmp_path: Path) -> Config:
    return Config(data_dir=tmp_path / "data", log_dir=tmp_path / "logs")


@pytest.fixture(scope="module")
def synthetic_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("synthetic")
    spec = SyntheticSpec(
        n_provinces=3,
        n_years=10,
        cells_per_province=1,
        models=("model_a",),
        rcps=("rcp45",),
        projection_end=2030,
    )
    generate_synthetic(spec, out)
    return out


class TestResolveSpec:
    def test_default_is_baseline(self) -> None:
        spec = resolve_spec()
        assert spec.name == "baseline"
        assert spec.form is FormKind.POLYNOMIAL

    def test_projection_variant(self) -> None:
        assert resolve_spec(variant="highlow_nolag").interaction is Interaction.LOW_INCOME

    def test_file_and_variant_conflict(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError):
            resolve_spec(tmp_path / "spec.cfg", "baseline")

    def test_unknown_variant(self) -> None:
        with pytest.raises(ConfigurationError) as exc_info:
            resolve_spec(variant="nope")
        assert "nope" in exc_info.value.message


class TestDatasetServices:
    def test_validate_synthetic(self, config: Config, synthetic_dir: Path) -> None:
        response = run_validate(
            config,
            ValidateRequest(panel=str(synthetic_dir / "panel.csv"), shares=str(synthetic_dir / "shares.csv")),
        )
        assert response.ok
        assert response.violations == []
        assert (config.log_dir / "run.jsonl").exists()

    def test_validate_reports_missing(self, config: Config, tmp_path: Path) -> None:
        response = run_validate(config, ValidateRequest(panel=str(tmp_path / "none.csv")))
        assert not response.ok
        assert response.violations[0].code == "NOT_FOUND"

    def test_synth(self, config: Config, tmp_path: Path) -> None:
        request = SynthRequest(
            out=str(tmp_path / "fixtures"), n_provinces=2, n_years=3, models=["m"], rcps=["rcp45"]
        )
        response = run_synth(config, request)
        assert Path(response.files["pipeline"]).exists()
        assert Path(response.files["panel"]).exists()


class TestAggregateService:
    def test_aggregate_and_merge(self, config: Config, synthetic_dir: Path, tmp_path: Path) -> None:
        response = run_aggregate(
            config,
            AggregateRequest(
                grid_hourly=str(synthetic_dir / "grid_hourly.csv"),
                grid_daily=str(synthetic_dir / "grid_daily.csv"),
                cell_weights=str(synthetic_dir / "cell_weights.csv"),
                population_weights=str(synthetic_dir / "population_weights.csv"),
                out=str(tmp_path / "regressors.csv"),
                panel=str(synthetic_dir / "panel.csv"),
            ),
        )
        assert response.rows == 30
        assert response.provinces == 3
        assert response.years == list(range(2013, 2023))
        assert response.panel_out == str(tmp_path / "panel_merged.csv")

        # the emitted panel was built with the same kernels
        regressors = pd.read_csv(tmp_path / "regressors.csv")
        panel = pd.read_csv(synthetic_dir / "panel.csv")
        merged = regressors.merge(panel, on=["province_id", "year"], suffixes=("", "_panel"))
        pd.testing.assert_series_equal(
            merged["temp_p1"], merged["temp_p1_panel"], check_names=False, rtol=1e-9
        )

    def test_years_must_pair(self) -> None:
        with pytest.raises(ValueError):
            AggregateRequest(grid_hourly="a", cell_weights="b", population_weights="c", out="d", start_year=2000)


class TestFitService:
    def test_fit_writes_outputs(self, config: Config, synthetic_dir: Path, tmp_path: Path) -> None:
        response = run_fit(config, FitRequest(panel=str(synthetic_dir / "panel.csv"), out_dir=str(tmp_path / "fit")))
        assert response.n_obs == 30
        assert response.cluster_count == 3
        assert [c.name for c in response.coefficients] == ["temp_p1", "temp_p2", "precip", "precip_sq"]
        for name in ("fit", "coefficients", "spec", "response_curve"):
            assert Path(response.outputs[name]).exists()
        curve = pd.read_csv(response.outputs["response_curve"])
        assert curve["temperature"].min() == 11.0
        assert curve["temperature"].max() == 41.0

    def test_fit_variant(self, config: Config, synthetic_dir: Path, tmp_path: Path) -> None:
        response = run_fit(
            config,
            FitRequest(panel=str(synthetic_dir / "panel.csv"), out_dir=str(tmp_path / "fit"), variant="no_precip"),
        )
        assert response.spec == "no_precip"
        assert [c.name for c in response.coefficients] == ["temp_p1", "temp_p2"]


class TestSelectService:
    def test_select_writes_winner(self, config: Config, tmp_path: Path) -> None:
        make_panel_frame(n_years=20, fine_bins=True, seed=11).to_csv(tmp_path / "panel.csv", index=False)
        (tmp_path / "candidates.csv").write_text("lower_edge,interval\n23,5\n24,3\n")
        response = run_select(
            config,
            SelectRequest(
                panel=str(tmp_path / "panel.csv"),
                out_dir=str(tmp_path / "selection"),
                candidates=str(tmp_path / "candidates.csv"),
            ),
        )
        assert response.winner in {"23_5", "24_3"}
        assert sum(c.winner for c in response.candidates) == 1
        assert Path(response.outputs["cv"]).exists()
        assert Path(response.outputs["selected"]).exists()

    def test_unknown_year_effect(self, config: Config, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError):
            run_select(
                config,
                SelectRequest(panel=str(tmp_path / "p.csv"), out_dir=str(tmp_path), year_effect="median"),
            )


class TestProjectionServices:
    def test_project_and_report(self, config: Config, synthetic_dir: Path, tmp_path: Path) -> None:
        projected = run_projection(
            config,
            ProjectRequest(
                panel=str(synthetic_dir / "panel.csv"),
                climate_dir=str(synthetic_dir / "climate"),
                out=str(tmp_path / "runs"),
                seed=3,
                draws=2,
                bias_correct=True,
                end_year=2030,
                shares=str(synthetic_dir / "shares.csv"),
            ),
        )
        assert projected.partitions == ["common_nolag/rcp45/model_a/baseline.csv"]
        # 3 draws x 3 provinces x 8 years
        assert projected.rows == 72
        assert projected.draws == 2

        report = run_report(
            config,
            ReportRequest(
                runs=str(tmp_path / "runs"),
                shares=str(synthetic_dir / "shares.csv"),
                out=str(tmp_path / "report" / "summary.csv"),
            ),
        )
        assert report.scenarios == ["common_nolag/rcp45/baseline"]
        assert len(report.files) == 4
        summary = pd.read_csv(report.out)
        assert set(summary["scope"]) == {"gdp", "grp", "gpp"}

    def test_unknown_initial_levels(self, config: Config, synthetic_dir: Path, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError):
            run_projection(
                config,
                ProjectRequest(
                    panel=str(synthetic_dir / "panel.csv"),
                    climate_dir=str(synthetic_dir / "climate"),
                    out=str(tmp_path / "runs"),
                    seed=0,
                    initial_levels="tiny",
                ),
            )

    def test_unknown_scope(self, config: Config, tmp_path: Path) -> None:
        with pytest.raises(ValidationError):
            run_report(config, ReportRequest(runs="r", shares="s", out="o", scopes=["county"]))


class TestPipeline:
    def _write_config(self, synthetic_dir: Path, **overrides: object) -> Path:
        data = yaml.safe_load((synthetic_dir / "pipeline.yaml").read_text())
        data.update({"draws": 2, "end_year": 2030, "out_dir": "out_test"})
        data.update(overrides)
        path = synthetic_dir / f"pipeline_{len(overrides)}.yaml"
        path.write_text(yaml.safe_dump(data))
        return path

    def test_end_to_end(self, config: Config, synthetic_dir: Path) -> None:
        path = self._write_config(synthetic_dir)
        response = run_pipeline(config, PipelineRequest(config=str(path)))
        assert [s.name for s in response.stages] == ["config", "validate", "aggregate", "fit", "project", "report"]
        manifest = json.loads(Path(response.manifest).read_text())
        assert manifest["seed"] == 0
        assert manifest["config"]["panel"] == "panel.csv"
        assert "grid_hourly.csv" in manifest["inputs"]
        assert list(manifest["outputs"]) == ["out_test/report/summary.csv"]
        assert Path(response.summary).exists()

    def test_failing_stage_is_named(self, config: Config, synthetic_dir: Path) -> None:
        path = self._write_config(synthetic_dir, panel="missing.csv")
        with pytest.raises(StageError) as exc_info:
            run_pipeline(config, PipelineRequest(config=str(path)))
        assert exc_info.value.stage == "config"
        assert exc_info.value.exit_code == EXIT_CONFIG
