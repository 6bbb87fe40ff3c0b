"""Tests for dataset validation."""

from pathlib import Path

import pytest

from climpanel.synthetic import SyntheticSpec, generate_synthetic
from climpanel.validation import DatasetPaths, validate


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("synthetic")
    generate_synthetic(
        SyntheticSpec(
            n_provinces=3,
            n_years=5,
            cells_per_province=1,
            models=("model_a",),
            rcps=("rcp45",),
            projection_end=2030,
        ),
        out,
    )
    return out


def _paths(root: Path) -> DatasetPaths:
    return DatasetPaths(
        grid_hourly=root / "grid_hourly.csv",
        grid_daily=root / "grid_daily.csv",
        cell_weights=root / "cell_weights.csv",
        population_weights=root / "population_weights.csv",
        panel=root / "panel.csv",
        climate_dir=root / "climate",
        growth=root / "growth.csv",
        shares=root / "shares.csv",
    )


def test_synthetic_set_is_valid(fixture_dir: Path) -> None:
    report = validate(_paths(fixture_dir))
    assert report.ok, [v.to_dict() for v in report.violations]
    assert len(report.checked) >= 8


def test_missing_file(tmp_path: Path) -> None:
    report = validate(DatasetPaths(panel=tmp_path / "panel.csv"))
    assert not report.ok
    assert report.violations[0].code == "NOT_FOUND"


def test_reports_every_violation(tmp_path: Path) -> None:
    (tmp_path / "cell_weights.csv").write_text(
        "polygon_id,cell_id,w_cj\na,c1,0.5\na,c2,0.4\nb,c3,1.0\nc,c4,0.7\n"
    )
    (tmp_path / "population_weights.csv").write_text(
        "province_id,polygon_id,year_from,year_to,w_jp\nP00,a,1900,2100,1.0\n"
    )
    (tmp_path / "panel.csv").write_text(
        "province_id,year,growth,region_id\nP00,2000,1.0,north\nP00,2000,2.0,north\n"
    )
    report = validate(
        DatasetPaths(
            cell_weights=tmp_path / "cell_weights.csv",
            population_weights=tmp_path / "population_weights.csv",
            panel=tmp_path / "panel.csv",
        )
    )
    codes = [v.code for v in report.violations]
    assert codes == ["INVALID_WEIGHTS", "INVALID_WEIGHTS", "UNIQUENESS_VIOLATION"]
    assert report.violations[0].line == 2
    assert report.violations[1].line == 5
    assert report.violations[2].line == 3


def test_panel_year_gap(tmp_path: Path) -> None:
    (tmp_path / "panel.csv").write_text(
        "province_id,year,growth,region_id\nP00,2000,1.0,north\nP00,2001,1.0,north\nP00,2003,1.0,north\n"
    )
    report = validate(DatasetPaths(panel=tmp_path / "panel.csv"))
    assert [v.code for v in report.violations] == ["MISSING_DATA"]
    assert "2002" in report.violations[0].message


def test_negative_rain_line(fixture_dir: Path, tmp_path: Path) -> None:
    lines = (fixture_dir / "grid_daily.csv").read_text().splitlines()
    cell, date, _ = lines[3].split(",")
    lines[3] = f"{cell},{date},-1.0"
    (tmp_path / "grid_daily.csv").write_text("\n".join(lines) + "\n")
    report = validate(DatasetPaths(grid_daily=tmp_path / "grid_daily.csv"))
    assert [(v.code, v.line) for v in report.violations] == [("INVALID_DATA", 4)]


def test_climate_missing_province(fixture_dir: Path, tmp_path: Path) -> None:
    climate = tmp_path / "climate" / "rcp45"
    climate.mkdir(parents=True)
    source = (fixture_dir / "climate" / "rcp45" / "model_a.csv").read_text().splitlines()
    kept = [source[0]] + [line for line in source[1:] if not line.startswith("P02,")]
    (climate / "model_a.csv").write_text("\n".join(kept) + "\n")
    report = validate(DatasetPaths(panel=fixture_dir / "panel.csv", climate_dir=tmp_path / "climate"))
    assert [v.code for v in report.violations] == ["MISSING_DATA"]
    assert "P02" in report.violations[0].message
