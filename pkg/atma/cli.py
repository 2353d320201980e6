#!/usr/bin/env python3
"""
atma CLI - Aliased Time-Modulated Array Experiment Runner
Runs config-driven sweeps and writes each result table as CSV plus a JSON sidecar.
"""

import sys
from pathlib import Path
from typing import Any, Callable, NoReturn, Optional

import click

from . import __version__
from .config.loader import (
    EXPERIMENT_ALIASES,
    ConfigError,
    ExperimentConfig,
    canonical_experiment,
    load_defaults,
    load_experiment_config,
    packaged_config,
)
from .experiments import EXPERIMENTS, GoldenCheckEngine, create_experiment, run_experiment
from .experiments.base import PointResult
from .reporters.csv_formatter import CsvFormatter
from .reporters.sidecar_formatter import SidecarFormatter
from .reporters.summary_formatter import SummaryFormatter

EXIT_OK = 0
EXIT_GOLDEN_FAILED = 1
EXIT_CONFIG_ERROR = 2


def fail(message: str, code: int = EXIT_CONFIG_ERROR) -> NoReturn:
    click.echo(f"❌ Error: {message}", err=True)
    sys.exit(code)


def load_config(
    config_path: Path, experiment: Optional[str] = None
) -> ExperimentConfig:
    if not config_path.exists():
        fail(f"Config file not found: {config_path}")
    try:
        return load_experiment_config(config_path, load_defaults(), experiment)
    except ConfigError as e:
        fail(e.describe(config_path))


def execute(
    config_path: Path,
    experiment: Optional[str],
    out: Optional[Path],
    seed: Optional[int],
    jobs: int,
    quiet: bool,
    verbose: bool,
) -> None:
    config = load_config(config_path, experiment)
    if seed is not None:
        config.seed = seed
    if out is not None:
        config.output_dir = str(out)

    try:
        runner = create_experiment(config)
    except ConfigError as e:
        fail(e.describe(config_path))

    out_dir = Path(config.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        fail(f"Cannot create output directory {out_dir}: {e}")

    def report_point(result: PointResult) -> None:
        p = result.point
        label = f"N={p.n_states} A={p.alias_factor} O_tau={p.oversampling} d={p.delay}"
        for message in result.violations:
            click.echo(f"⚠️  Warning: {label}: {message}", err=True)
        if verbose:
            click.echo(f"  • {label}: {len(result.rows)} rows")

    if not quiet:
        click.echo(f"🎯 Running {config.experiment} ({config.name})...")
    results = run_experiment(runner, jobs=jobs, on_point=report_point)
    rows = [row for result in results for row in result.rows]
    flagged = [result for result in results if result.violations]

    golden = GoldenCheckEngine(config.golden)
    golden.process_rows(rows)
    summary = golden.get_golden_summary()

    csv_formatter = CsvFormatter(config.db_decimals)
    csv_path = out_dir / f"{config.name}.csv"
    sidecar_path = out_dir / f"{config.name}.json"
    try:
        csv_path.write_text(csv_formatter.format(runner.header, rows), encoding="utf-8")
        sidecar_path.write_text(
            SidecarFormatter().format(
                config,
                runner.header,
                len(rows),
                len(flagged),
                golden=summary,
                extras=runner.extras(),
            ),
            encoding="utf-8",
        )
    except OSError as e:
        fail(f"Cannot write results to {out_dir}: {e}")

    if not quiet:
        click.echo(
            SummaryFormatter().format(
                config.name, runner.header, rows, summary, csv_formatter
            )
        )
    click.echo(f"✅ Results written to {csv_path}")

    if results and len(flagged) == len(results):
        fail("every sweep point violates the design constraints")
    if not golden.ok:
        sys.exit(EXIT_GOLDEN_FAILED)
    sys.exit(EXIT_OK)


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by `run` and every experiment subcommand."""
    decorators = [
        click.option(
            "--out",
            "-o",
            type=click.Path(file_okay=False, path_type=Path),
            help="Output directory (overrides output_dir in the config)",
        ),
        click.option(
            "--seed",
            type=click.IntRange(min=0, max=2**64 - 1),
            help="Random seed (overrides seed in the config)",
        ),
        click.option(
            "--jobs",
            "-j",
            type=click.IntRange(min=1),
            default=1,
            show_default=True,
            help="Worker threads for the sweep",
        ),
        click.option("--quiet", "-q", is_flag=True, help="Skip the console summary"),
        click.option(
            "--verbose", "-v", is_flag=True, help="Echo each sweep point as it finishes"
        ),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


@click.group()
@click.version_option(version=__version__)
def cli():
    """atma - Aliased time-modulated array OFDM experiments"""
    pass


@click.command()
@click.argument("config_file", type=click.Path(path_type=Path))
@run_options
def run(
    config_file: Path,
    out: Optional[Path] = None,
    seed: Optional[int] = None,
    jobs: int = 1,
    quiet: bool = False,
    verbose: bool = False,
) -> None:
    """🎯 Run the experiment described by CONFIG_FILE

      📦 Examples:

    atma run sweep.yaml                    # Experiment type taken from the file
    atma run sweep.yaml --out results      # Write CSV/JSON into results/
    atma run sweep.yaml --jobs 4 --seed 7  # Parallel sweep, fixed seed
    """
    execute(config_file, None, out, seed, jobs, quiet, verbose)


def experiment_command(name: str) -> click.Command:
    """Subcommand running experiment `name`, by default from its packaged config."""

    @click.command(name=name, help=f"Run the {canonical_experiment(name)} experiment")
    @click.option(
        "--config",
        "-c",
        "config_file",
        type=click.Path(path_type=Path),
        help=f"Experiment config (default: packaged {name}.yaml)",
    )
    @run_options
    def command(
        config_file: Optional[Path] = None,
        out: Optional[Path] = None,
        seed: Optional[int] = None,
        jobs: int = 1,
        quiet: bool = False,
        verbose: bool = False,
    ) -> None:
        execute(
            config_file or packaged_config(name), name, out, seed, jobs, quiet, verbose
        )

    return command


cli.add_command(run)
for _name in [*EXPERIMENTS, *EXPERIMENT_ALIASES]:
    cli.add_command(experiment_command(_name))


if __name__ == "__main__":
    cli()
