"""
Unit Tests for the command-line interface
"""
import pytest
from typer.testing import CliRunner

from client.cli import EXIT_FAILURE, EXIT_USAGE, app
from engine.errors import NoExistence

runner = CliRunner()

FISHER = """
[problem]
p = 2
d = "1"
rho = "u*(1-u)"
"""

DEGENERATE = """
[problem]
p = 2
d = "u"
rho = "u*(1-u)"

[problem.at_0]
d = { constant = 1, exponent = 1 }
rho = { constant = 1, exponent = 1 }

[problem.at_1]
d = { constant = 1, exponent = 0 }
rho = { constant = 1, exponent = 1 }

[profile]
t_window = [-40, 5]
"""

NO_WAVE = """
[problem]
p = 2
d = "1"
rho = "sqrt(u)*(1-u)"
"""

SMALL_GRID = """
[sweep]
p = [2.0]
delta = [1.0]
r = [1.0]
"""


@pytest.fixture
def config(tmp_path):
    def write(text: str):
        path = tmp_path / "run.toml"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


@pytest.mark.unit
def test_check_passes(config):
    """Test check on a well-posed problem"""
    result = runner.invoke(app, ["check", config(FISHER), "--json"])
    assert result.exit_code == 0, result.output
    assert '"ell0"' in result.output


@pytest.mark.unit
def test_check_without_wave(config):
    """Test check when ell0 is infinite"""
    result = runner.invoke(app, ["check", config(NO_WAVE)])
    assert result.exit_code == EXIT_FAILURE
    assert "unbounded" in result.output


@pytest.mark.unit
def test_configuration_errors(config, tmp_path):
    """Test usage exit code for bad configuration"""
    assert runner.invoke(app, ["check", str(tmp_path / "absent.toml")]).exit_code == EXIT_USAGE
    assert runner.invoke(app, ["check", config("[problem\n")]).exit_code == EXIT_USAGE
    bad = runner.invoke(app, ["check", config('[problem]\np = 2\nd = "1"\nrho = "u*(1-"\n')])
    assert bad.exit_code == EXIT_USAGE


@pytest.mark.unit
def test_engine_errors_exit_one(config, mocker):
    """Test that engine failures map to exit code 1"""
    mocker.patch("client.cli.cstar", side_effect=NoExistence("no travelling wave for any speed"))
    mocker.patch("client.cli.log_error")
    result = runner.invoke(app, ["cstar", config(FISHER)])
    assert result.exit_code == EXIT_FAILURE
    assert "no travelling wave" in result.output


@pytest.mark.unit
def test_bad_window(config, mocker):
    """Test the --t-window parser"""
    estimate = mocker.patch("client.cli.cstar")
    assert runner.invoke(app, ["profile", config(FISHER), "--t-window", "1,5"]).exit_code == EXIT_USAGE
    assert runner.invoke(app, ["profile", config(FISHER), "--t-window", "abc"]).exit_code == EXIT_USAGE
    estimate.assert_not_called()


@pytest.mark.integration
def test_cstar_report(config, mocker, degenerate_estimate, tmp_path):
    """Test the c* report with sign tests"""
    mocker.patch("client.cli.cstar", return_value=degenerate_estimate)
    result = runner.invoke(app, ["cstar", config(DEGENERATE), "--k", "1.0", "--out", str(tmp_path), "--save-solution"])
    assert result.exit_code == 0, result.output
    assert "c* = " in result.output
    assert (tmp_path / "wave_cstar.json").exists()
    assert (tmp_path / "wave_reduced.csv").exists()


@pytest.mark.integration
def test_classify_below_cstar(config, mocker, degenerate_estimate):
    """Test that a speed below c* is a usage error"""
    mocker.patch("client.cli.cstar", return_value=degenerate_estimate)
    result = runner.invoke(app, ["classify", config(DEGENERATE), "--c", "0.3"])
    assert result.exit_code == EXIT_USAGE


@pytest.mark.integration
def test_classify_sharp(config, mocker, degenerate_estimate):
    """Test classification at c*"""
    mocker.patch("client.cli.cstar", return_value=degenerate_estimate)
    result = runner.invoke(app, ["classify", config(DEGENERATE)])
    assert result.exit_code == 0, result.output
    assert "sharp-I" in result.output


@pytest.mark.integration
def test_profile_written(config, mocker, degenerate_estimate, tmp_path):
    """Test profile reconstruction, verification and CSV output"""
    mocker.patch("client.cli.cstar", return_value=degenerate_estimate)
    result = runner.invoke(app, ["profile", config(DEGENERATE), "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "wave_profile.csv").exists()
    assert (tmp_path / "wave_profile.json").exists()


@pytest.mark.unit
def test_power_law_sweep(config):
    """Test a one-point power-law sweep"""
    result = runner.invoke(app, ["sweep", config(SMALL_GRID), "--json"])
    assert result.exit_code == 0, result.output
    assert '"conflict": 0' in result.output


@pytest.mark.unit
def test_unknown_sweep_mode(config):
    """Test the mode check"""
    assert runner.invoke(app, ["sweep", config(SMALL_GRID), "--mode", "grid"]).exit_code == EXIT_USAGE


@pytest.mark.unit
def test_grid_minimum(config):
    """Test that hypothesis grids below 16 are a usage error"""
    assert runner.invoke(app, ["check", config(FISHER), "--grid", "8"]).exit_code == EXIT_USAGE
