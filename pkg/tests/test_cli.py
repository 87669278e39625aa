"""Command-line surface: staged commands, pipeline runs and exit statuses."""

import importlib

import pytest

from src.cli.fixtures import PIPELINES
from src.cli.main import main
from src.errors import InvariantViolation
from src.logging import set_log_level


@pytest.fixture
def fixtures_dir(tmp_path):
    assert main(["make-fixtures", "--out", str(tmp_path)]) == 0
    return tmp_path


def last_line(text: str) -> str:
    return text.strip().splitlines()[-1]


# ============================================================================
# Fixtures
# ============================================================================


def test_make_fixtures_lists_what_it_wrote(tmp_path, capsys):
    assert main(["make-fixtures", "--out", str(tmp_path), "--buildings", "3"]) == 0
    labels = capsys.readouterr().out.split()
    assert "city.gml" in labels
    assert "techniques/cone-at-point.tech" in labels
    assert all(f"{name}.pipeline" in labels for name in PIPELINES)
    for label in labels:
        assert (tmp_path / label).is_file()


def test_fixtures_are_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["make-fixtures", "--out", str(first)]) == 0
    assert main(["make-fixtures", "--out", str(second)]) == 0
    files = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert files
    for rel in files:
        assert (first / rel).read_bytes() == (second / rel).read_bytes()


def test_fixture_building_count_must_be_positive(tmp_path, capsys):
    assert main(["make-fixtures", "--out", str(tmp_path), "--buildings", "0"]) == 2
    assert "at least one building" in capsys.readouterr().err


def test_large_synthetic_city_size(tmp_path, capsys):
    assert main(["make-fixtures", "--out", str(tmp_path), "--buildings", "100"]) == 0
    capsys.readouterr()
    assert main(["convert", "--model", str(tmp_path / "city.gml"), "--out", str(tmp_path / "city.nt")]) == 0
    count = int(capsys.readouterr().out)
    assert 40_000 <= count <= 120_000
    lines = (tmp_path / "city.nt").read_text(encoding="utf-8").splitlines()
    assert len(lines) == count


# ============================================================================
# Pipeline
# ============================================================================


def test_pedestrian_pipeline(fixtures_dir, capsys):
    capsys.readouterr()
    assert main(["pipeline", str(fixtures_dir / "pedestrians.pipeline")]) == 0
    captured = capsys.readouterr()
    output = fixtures_dir / "out" / "pedestrians.html"
    assert captured.out.strip() == str(output)
    for stage in ("convert", "ingest", "apply", "layout", "emit"):
        assert f"{stage}: " in captured.err
    page = output.read_text(encoding="utf-8")
    assert page.count("<cone ") == 2
    assert '<transform rotation="1 0 0 1.5708" translation="-13 25 21">' in page
    assert '<cone height="42"' in page
    assert 'diffusecolor="0 0 1"' in page
    assert not (fixtures_dir / "out" / "pedestrians.html.part").exists()


def test_zero_count_row_is_skipped(fixtures_dir, capsys):
    data = fixtures_dir / "pedestrians.csv"
    data.write_text(data.read_text(encoding="utf-8").rstrip("\n") + "\n0,4,-6,0\n", encoding="utf-8")
    capsys.readouterr()
    assert main(["pipeline", str(fixtures_dir / "pedestrians.pipeline")]) == 0
    page = (fixtures_dir / "out" / "pedestrians.html").read_text(encoding="utf-8")
    assert page.count("<cone ") == 2
    assert 'height="0"' not in page


@pytest.mark.parametrize("name", sorted(PIPELINES))
def test_every_fixture_pipeline_runs(fixtures_dir, name):
    assert main(["pipeline", str(fixtures_dir / f"{name}.pipeline")]) == 0
    assert (fixtures_dir / "out" / f"{name}.html").stat().st_size > 0


def test_staged_commands_match_the_pipeline(fixtures_dir, capsys):
    d = fixtures_dir
    technique = str(d / "techniques" / "cone-at-point.tech")
    assert main(["pipeline", str(d / "pedestrians.pipeline")]) == 0
    steps = [
        ["convert", "--model", str(d / "city.gml"), "--out", str(d / "model.nt")],
        ["ingest", "--data", str(d / "pedestrians.csv"), "--kind", "point", "--type", ":PedestrianCounting",
         "--id-prefix", "pednum", "--loc-prefix", "loc", "--out", str(d / "peds.nt")],
        ["apply", "--model", str(d / "model.nt"), "--data", str(d / "peds.nt"),
         "--technique", technique, "--out", str(d / "abstract.nt")],
        ["layout", "--model", str(d / "model.nt"), "--abstract", str(d / "abstract.nt"),
         "--technique", technique, "--out", str(d / "scene.jsonl")],
        ["emit", "--model", str(d / "model.nt"), "--scene", str(d / "scene.jsonl"),
         "--technique", technique, "--format", "x3dom", "--out", str(d / "staged.html")],
    ]
    capsys.readouterr()
    for argv in steps:
        assert main(argv) == 0, argv
    printed = capsys.readouterr().out.split()
    # convert and ingest print triple counts, apply and layout node counts
    assert printed[2:] == ["2", "2"]
    assert (d / "staged.html").read_bytes() == (d / "out" / "pedestrians.html").read_bytes()


def test_apply_over_two_datasets(fixtures_dir, capsys):
    d = fixtures_dir
    for prefix in ("a", "b"):
        assert main([
            "ingest", "--data", str(d / "pollutants.csv"), "--kind", "point", "--type", ":PollutantConcentration",
            "--id-prefix", prefix, "--loc-prefix", f"{prefix}loc", "--out", str(d / f"{prefix}.nt"),
        ]) == 0
    capsys.readouterr()
    assert main([
        "apply", "--model", str(d / "city.gml"), "--data", str(d / "a.nt"), "--data", str(d / "b.nt"),
        "--technique", "sphere-at-point", "--out", str(d / "abstract.nt"),
    ]) == 0
    assert last_line(capsys.readouterr().out) == "10"


def test_parameter_overrides_reach_the_scene(fixtures_dir, capsys):
    d = fixtures_dir
    technique = str(d / "techniques" / "cone-at-point.tech")
    assert main(["convert", "--model", str(d / "city.gml"), "--out", str(d / "model.nt")]) == 0
    assert main(["ingest", "--data", str(d / "pedestrians.csv"), "--kind", "point",
                 "--type", "PedestrianCounting", "--out", str(d / "peds.nt")]) == 0
    assert main(["apply", "--model", str(d / "model.nt"), "--data", str(d / "peds.nt"),
                 "--technique", technique, "--out", str(d / "abstract.nt")]) == 0
    assert main(["layout", "--model", str(d / "model.nt"), "--abstract", str(d / "abstract.nt"),
                 "--technique", technique, "--param", "layout.cone-base-radius=2.5",
                 "--out", str(d / "scene.jsonl")]) == 0
    assert '"base_radius":2.5' in (d / "scene.jsonl").read_text(encoding="utf-8")


# ============================================================================
# Exit statuses
# ============================================================================


def test_usage_errors_exit_2():
    assert main([]) == 2
    assert main(["convert"]) == 2


def test_missing_technique_exits_2(tmp_path, capsys):
    status = main([
        "apply", "--model", str(tmp_path / "m.nt"), "--data", str(tmp_path / "d.nt"),
        "--technique", "no-such-technique", "--out", str(tmp_path / "a.nt"),
    ])
    assert status == 2
    captured = capsys.readouterr()
    assert "technique file not found: no-such-technique" in captured.err
    assert captured.out == ""


def test_malformed_model_exits_2(write_file, capsys):
    model = write_file("broken.gml", "<core:CityModel")
    assert main(["convert", "--model", str(model), "--out", str(model.with_suffix(".nt"))]) == 2
    assert "❌" in capsys.readouterr().err
    assert not model.with_suffix(".nt").exists()


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["pipeline", str(tmp_path / "absent.pipeline")]) == 2
    assert "cannot read config" in capsys.readouterr().err


def test_case_mismatch_leaves_no_output(fixtures_dir, write_file, capsys):
    config = (fixtures_dir / "pedestrians.pipeline").read_text(encoding="utf-8")
    config = config.replace("cone-at-point", "panel-near-object").replace("out/pedestrians", "out/mismatch")
    path = write_file("mismatch.pipeline", config)
    assert main(["pipeline", str(path)]) == 2
    assert "expects object-related" in capsys.readouterr().err
    assert not (fixtures_dir / "out" / "mismatch.html").exists()


@pytest.mark.parametrize("error", [InvariantViolation("broken invariant"), RuntimeError("boom")])
def test_internal_errors_exit_3(monkeypatch, tmp_path, error):
    def fail(path):
        raise error

    monkeypatch.setattr(importlib.import_module("src.cli.main"), "convert_model", fail)
    assert main(["convert", "--model", str(tmp_path / "x.gml"), "--out", str(tmp_path / "x.nt")]) == 3


def test_log_file_is_written(fixtures_dir):
    log = fixtures_dir / "run.log"
    try:
        assert main(["--debug", "--log-file", str(log), "pipeline", str(fixtures_dir / "pedestrians.pipeline")]) == 0
    finally:
        set_log_level("INFO")
    text = log.read_text(encoding="utf-8")
    assert "Running stage: convert" in text
    assert "DEBUG" in text
