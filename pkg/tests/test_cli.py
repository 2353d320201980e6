"""
Tests for the atma command line
"""

import json

import pytest
from click.testing import CliRunner

from atma import __version__
from atma.cli import EXIT_CONFIG_ERROR, EXIT_GOLDEN_FAILED, EXIT_OK, cli
from atma.config.loader import EXPERIMENT_ALIASES
from atma.experiments import EXPERIMENTS

SMALL_SWEEP = """\
experiment: aclr-sweep
n_states: 4
alias_factor: [2, 4]
golden:
  - {column: aclr_db, where: {A: 4}, expected: 19.71, tolerance: 0.01}
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="sweep.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


class TestRun:
    def test_small_sweep(self, runner, write_config, tmp_path):
        """Test a small sweep end to end"""
        config = write_config(SMALL_SWEEP)
        out = tmp_path / "out"
        result = invoke(runner, "run", config, "--out", out)
        assert result.exit_code == EXIT_OK, result.output
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "N,A,O_tau,d,K_b,N_cp,aclr_db,meets_threshold,violations"
        assert len(lines) == 3
        assert "✅ Golden checks" in result.output
        sidecar = json.loads((out / "sweep.json").read_text())
        assert sidecar["golden"]["passed"] == 1
        assert sidecar["config_file"] == "sweep.yaml"

    def test_empty_sweep_writes_header_only(self, runner, write_config, tmp_path):
        """Test empty sweep writes a header-only CSV"""
        config = write_config("experiment: ripple-sweep\nalias_factor: []\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_OK, result.output
        assert (tmp_path / "sweep.csv").read_text() == (
            "N,A,O_tau,d,K_b,N_cp,ripple_db,violations\n"
        )

    def test_reruns_are_byte_identical(self, runner, write_config, tmp_path):
        """Test reruns are byte identical"""
        config = write_config(
            "experiment: link-sim\nn_states: 4\nalias_factor: [2, 4]\nsnr_db: 15\n"
        )
        for out in ("a", "b"):
            result = invoke(runner, "run", config, "--out", tmp_path / out, "-j", "2")
            assert result.exit_code == EXIT_OK, result.output
        for suffix in ("csv", "json"):
            first = (tmp_path / "a" / f"sweep.{suffix}").read_bytes()
            second = (tmp_path / "b" / f"sweep.{suffix}").read_bytes()
            assert first == second

    def test_seed_override(self, runner, write_config, tmp_path):
        """Test --seed override and quiet mode"""
        config = write_config(SMALL_SWEEP)
        result = invoke(runner, "run", config, "--out", tmp_path, "--seed", "42", "-q")
        assert result.exit_code == EXIT_OK, result.output
        assert json.loads((tmp_path / "sweep.json").read_text())["seed"] == 42
        assert "📊" not in result.output

    def test_verbose_lists_points(self, runner, write_config, tmp_path):
        """Test verbose mode lists points"""
        config = write_config(SMALL_SWEEP)
        result = invoke(runner, "run", config, "--out", tmp_path, "-v")
        assert "N=4 A=2 O_tau=1 d=0" in result.output


class TestExitCodes:
    def test_yaml_error_names_line(self, runner, write_config, tmp_path):
        """Test YAML error exits 2 with the line"""
        config = write_config("experiment: aclr-sweep\nn_states: 4\n  bad: indent\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert f"{config}:3:" in result.output
        assert not (tmp_path / "sweep.csv").exists()

    def test_field_error(self, runner, write_config, tmp_path):
        """Test field error exits 2"""
        config = write_config("experiment: aclr-sweep\nn_states: many\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "field 'n_states'" in result.output

    def test_missing_config(self, runner, tmp_path):
        """Test missing config exits 2"""
        result = invoke(runner, "run", tmp_path / "absent.yaml")
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "Config file not found" in result.output

    def test_unknown_experiment(self, runner, write_config, tmp_path):
        """Test unknown experiment exits 2"""
        config = write_config("experiment: waterfall\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "unknown experiment 'waterfall'" in result.output

    def test_golden_failure(self, runner, write_config, tmp_path):
        """Test golden failure exits 1"""
        config = write_config(SMALL_SWEEP.replace("19.71", "25.0"))
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_GOLDEN_FAILED
        assert "out of tolerance" in result.output
        assert (tmp_path / "sweep.csv").exists()

    def test_partial_violations_still_succeed(self, runner, write_config, tmp_path):
        """Test partial violations exit 0 with warnings"""
        config = write_config(
            "experiment: aclr-sweep\nn_states: [3, 4]\nalias_factor: 4\noversampling: 2\n"
        )
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_OK, result.output
        assert "⚠️  Warning: N=3 A=4 O_tau=2 d=0" in result.output
        rows = (tmp_path / "sweep.csv").read_text().splitlines()
        assert "harmonic_on_switch_grid" in rows[1]

    def test_every_point_violated(self, runner, write_config, tmp_path):
        """Test all points violated exits 2"""
        config = write_config("experiment: aclr-sweep\nn_states: 2\nalias_factor: 2\ndelay: 5\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "every sweep point" in result.output
        assert (tmp_path / "sweep.csv").exists()

    def test_invalid_jobs(self, runner, write_config, tmp_path):
        """Test --jobs 0 is rejected"""
        config = write_config(SMALL_SWEEP)
        result = invoke(runner, "run", config, "--jobs", "0")
        assert result.exit_code == 2


class TestSubcommands:
    def test_every_experiment_registered(self):
        """Test every experiment is a subcommand"""
        assert set(EXPERIMENTS) <= set(cli.commands)
        assert "run" in cli.commands

    def test_packaged_allocation_table(self, runner, tmp_path):
        """Test packaged allocation table"""
        result = invoke(runner, "allocation-table", "--out", tmp_path)
        assert result.exit_code == EXIT_OK, result.output
        lines = (tmp_path / "allocation-table.csv").read_text().splitlines()
        assert lines[1].startswith("4,4,1,0,16,16,1/5,1/4,4,19.71")

    def test_short_names_registered(self):
        """Short experiment names are subcommands too"""
        assert set(EXPERIMENT_ALIASES) <= set(cli.commands)

    def test_short_name_matches_descriptive_name(self, runner, tmp_path):
        """table2 writes the same table as allocation-table"""
        for name in ("table2", "allocation-table"):
            result = invoke(runner, name, "--out", tmp_path, "-q")
            assert result.exit_code == EXIT_OK, result.output
        short = (tmp_path / "table2.csv").read_text()
        assert short == (tmp_path / "allocation-table.csv").read_text()
        sidecar = json.loads((tmp_path / "table2.json").read_text())
        assert sidecar["experiment"] == "allocation-table"

    def test_run_accepts_short_name(self, runner, write_config, tmp_path):
        """A config may declare its experiment by the short name"""
        config = write_config("experiment: table2\nallocations: [[4, 1]]\n")
        result = invoke(runner, "run", config, "--out", tmp_path)
        assert result.exit_code == EXIT_OK, result.output
        assert (tmp_path / "sweep.csv").read_text().startswith("N,A,O_tau,d,K_b,N_cp")

    def test_config_must_match_subcommand(self, runner, write_config, tmp_path):
        """Test config must match the subcommand"""
        config = write_config(SMALL_SWEEP)
        result = invoke(runner, "spectrum", "-c", config, "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "declares experiment 'aclr-sweep'" in result.output

    def test_version(self, runner):
        """Test --version"""
        result = invoke(runner, "--version")
        assert result.exit_code == 0
        assert __version__ in result.output
