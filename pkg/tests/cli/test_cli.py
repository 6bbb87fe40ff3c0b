"""Tests for CLI module."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from climpanel_cli.main import cli
from tests.core.fixtures import make_panel_frame


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CLIMPANEL_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.setenv("CLIMPANEL_LOG_DIR", str(tmp_path / "logs"))


@pytest.fixture
def panel_csv(tmp_path: Path) -> Path:
    path = tmp_path / "panel.csv"
    make_panel_frame().to_csv(path, index=False)
    return path


def test_cli_help() -> None:
    """Test CLI help output."""
    runner = CliRunner()
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "climpanel" in result.output
    for command in ("aggregate", "fit", "select-spec", "project", "report", "validate", "pipeline"):
        assert command in result.output


def test_cli_version() -> None:
    """Test CLI version output."""
    runner = CliRunner()
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "1.0.0" in result.output


def test_fit_json(panel_csv: Path, tmp_path: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["--json", "fit", str(panel_csv), "--out-dir", str(tmp_path / "fit")])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["spec"] == "baseline"
    assert data["n_obs"] == 72
    assert (tmp_path / "fit" / "coefficients.csv").exists()
    assert (tmp_path / "logs" / "run.jsonl").exists()


def test_fit_table(panel_csv: Path, tmp_path: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["fit", str(panel_csv), "--out-dir", str(tmp_path / "fit")])
    assert result.exit_code == 0
    assert "temp_p1" in result.output
    assert "clusters = 6" in result.output


def test_unknown_variant_exits_config(panel_csv: Path, tmp_path: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(
        cli, ["--json", "fit", str(panel_csv), "--variant", "nope", "--out-dir", str(tmp_path / "fit")]
    )
    assert result.exit_code == 4
    assert json.loads(result.stdout)["error"] == "CONFIG_ERROR"


def test_collinear_panel_exits_numerical(tmp_path: Path) -> None:
    frame = make_panel_frame()
    frame["temp_p2"] = 2.0 * frame["temp_p1"]
    frame.to_csv(tmp_path / "panel.csv", index=False)
    runner = CliRunner()
    result = runner.invoke(
        cli, ["--json", "fit", str(tmp_path / "panel.csv"), "--out-dir", str(tmp_path / "fit")]
    )
    assert result.exit_code == 3
    data = json.loads(result.stdout)
    assert data["error"] == "COLLINEAR_DESIGN"
    assert data["exit_code"] == 3


def test_validate_exits_validation(tmp_path: Path) -> None:
    (tmp_path / "panel.csv").write_text(
        "province_id,year,growth,region_id\nP00,2000,1.0,north\nP00,2000,2.0,north\n"
    )
    runner = CliRunner()
    result = runner.invoke(cli, ["--json", "validate", "--panel", str(tmp_path / "panel.csv")])
    assert result.exit_code == 2
    data = json.loads(result.stdout)
    assert not data["ok"]
    assert data["violations"][0]["code"] == "UNIQUENESS_VIOLATION"


def test_validate_ok(panel_csv: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["validate", "--panel", str(panel_csv)])
    assert result.exit_code == 0
    assert "1 files OK" in result.output


def test_directory_panel_is_usage_error(tmp_path: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(
        cli,
        [
            "project",
            "--panel",
            str(tmp_path),
            "--climate-dir",
            str(tmp_path),
            "--out",
            str(tmp_path / "runs"),
            "--seed",
            "1",
        ],
    )
    # a directory is not a panel file
    assert result.exit_code == 2


def test_pipeline_missing_config(tmp_path: Path) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["--json", "pipeline", str(tmp_path / "pipeline.yaml")])
    assert result.exit_code == 4
    data = json.loads(result.stdout)
    assert data["error"] == "NOT_FOUND"
    assert data["details"]["stage"] == "config"
    assert data["stage"] == "config"


def test_synth_writes_pipeline(tmp_path: Path) -> None:
    runner = CliRunner()
    out = tmp_path / "fixtures"
    result = runner.invoke(
        cli, ["--json", "synth", str(out), "--n-provinces", "2", "--n-years", "2", "--seed", "4"]
    )
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert Path(data["files"]["pipeline"]).exists()
    assert (out / "panel.csv").exists()
