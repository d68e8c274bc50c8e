# test_cli.py
import math

import orjson
import pandas as pd
import pytest
from click.testing import CliRunner

import cli as cli_module
from cli import RunConfig, cli
from config import Config
from errors import NonConvergence
from oscillator import quadrature_transform
from windows import chi


@pytest.fixture
def runner():
    return CliRunner()


def test_constants_writes_table_and_manifest(runner, tmp_path):
    result = runner.invoke(cli, ["constants", "--b", "2", "--eta", "1.5", "--eps", "0.5", "--d-irr", "3.1",
                                 "--output-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    table = pd.read_csv(tmp_path / "constants_table.csv")
    assert table.loc[0, "K"] == 88.0
    assert table.loc[0, "d_irr"] == 3.1
    assert (tmp_path / "constants_inequalities.csv").exists()
    manifest = orjson.loads((tmp_path / "constants_manifest.json").read_bytes())
    assert manifest["config"]["b"] == 2.0
    assert manifest["config"]["truncation"] == Config.TRUNCATION_PRESETS["default"]
    assert set(manifest["artifacts"]) == {str(tmp_path / "constants_table.csv"),
                                          str(tmp_path / "constants_inequalities.csv")}


@pytest.mark.parametrize("args, field", [
    (["constants", "--eta", "2.5"], "eta"),
    (["sample", "--case", "complex"], "case"),
    (["histogram", "--N", "0"], "N"),
    (["tails", "--source", "paper"], "source"),
])
def test_invalid_parameters_exit_two(runner, tmp_path, args, field):
    result = runner.invoke(cli, args + ["--output-dir", str(tmp_path)])
    assert result.exit_code == 2
    assert f"invalid {field}" in result.output


def test_tails_are_byte_reproducible(runner, tmp_path):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        result = runner.invoke(cli, ["tails", "--samples", "300", "--N", "50", "--seed", "5",
                                     "--output-dir", str(out)])
        assert result.exit_code == 0, result.output
        outputs.append((out / "tails_curve.csv").read_bytes())
    assert outputs[0] == outputs[1]
    frame = pd.read_csv(tmp_path / "a" / "tails_curve.csv")
    assert list(frame.columns) == ["R", "empirical", "asymptotic", "stderr", "fluct"]
    assert len(frame) == 61


def test_histogram_independent_of_threads(runner, tmp_path):
    blobs = []
    for threads in ("1", "3"):
        out = tmp_path / threads
        result = runner.invoke(cli, ["histogram", "--samples", "9000", "--N", "20", "--threads", threads,
                                     "--output-dir", str(out)])
        assert result.exit_code == 0, result.output
        blobs.append((out / "histogram_histogram.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_sample_dump(runner, tmp_path):
    result = runner.invoke(cli, ["sample", "--case", "irrational", "--samples", "25", "--output-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    points = pd.read_csv(tmp_path / "sample_points.csv")
    assert len(points) == 25
    assert set(points["tag"]) == {"irrational"}


def test_numerical_failure_exits_one(runner, tmp_path, mocker):
    def failing(config):
        raise NonConvergence("series did not settle", operation="sample")

    mocker.patch.dict(cli_module.HANDLERS, {"sample": failing})
    result = runner.invoke(cli, ["sample", "--output-dir", str(tmp_path)])
    assert result.exit_code == 1
    assert "sample: NonConvergence: series did not settle" in result.output


def test_raw_scipy_failure_exits_one_with_diagnostic(runner, tmp_path, mocker):
    mocker.patch("oscillator.integrate.quad", side_effect=ValueError("bad panel"))
    mocker.patch.dict(cli_module.HANDLERS, {"sample": lambda config: quadrature_transform(chi(1.0), 1.0, 0.7)})
    result = runner.invoke(cli, ["sample", "--output-dir", str(tmp_path)])
    assert result.exit_code == 1
    assert "quadrature_transform: QuadratureFailure: ValueError: bad panel" in result.output
    assert "Traceback" not in result.output


@pytest.mark.parametrize("status, code", [("SUCCESS", 0), ("PARTIAL", 1)])
def test_verify_maps_suite_status(runner, tmp_path, mocker, status, code):
    run_all = mocker.patch("test_integration.IntegrationTester.run_all_tests",
                           return_value={"overall_status": status})
    result = runner.invoke(cli, ["verify", "--output-dir", str(tmp_path)])
    assert result.exit_code == code
    run_all.assert_called_once()


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert Config.APP_VERSION in result.output


def test_run_config_defaults():
    config = RunConfig(subcommand="histogram", case="irrational")
    assert config.weyl_params() == (0.0, math.sqrt(2.0))
    assert RunConfig(subcommand="histogram").weyl_params() == (0.0, 0.0)
    assert RunConfig(subcommand="histogram", alpha=0.3, c=0.1).weyl_params() == (0.1, 0.3)
    with pytest.raises(ValueError):
        RunConfig(subcommand="plot")
