from __future__ import annotations

import functools
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Tuple

import click

from application import experiments
from application.experiments import ExperimentResult, RunOptions
from application.settings import Settings
from domain.errors import (
    ConfigurationError,
    InconsistentMeasure,
    OptimizerDidNotConverge,
    OutOfRange,
    QAccordError,
    StateFileError,
)
from domain.models import BellDiagonalCoords, MeasureReport, ProjectiveBasis
from domain.repositories import ResultRepository
from infrastructure.files.result_repository_csv import CsvResultRepository
from infrastructure.files.state_file import load_state_file
from interfaces.cli.line_spec import parse_line


EXIT_USAGE = 2
EXIT_INVALID_STATE = 3
EXIT_NOT_CONVERGED = 4
EXIT_VIOLATIONS = 5
EXIT_INTERNAL = 1

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

RepositoryFactory = Callable[[str], ResultRepository]


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    click.get_current_context().exit(code)


def _exit_codes(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map library exceptions to the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except StateFileError as exc:
            _fail(str(exc), EXIT_USAGE)
        except OptimizerDidNotConverge as exc:
            _fail(str(exc), EXIT_NOT_CONVERGED)
        except (InconsistentMeasure, ConfigurationError) as exc:
            _fail(str(exc), EXIT_INTERNAL)
        except (QAccordError, ValueError) as exc:
            _fail(f"invalid state: {exc}", EXIT_INVALID_STATE)

    return wrapper


def _parse_lines(ctx: click.Context, param: click.Parameter, values: Sequence[str]) -> Tuple[Tuple[BellDiagonalCoords, BellDiagonalCoords], ...]:
    try:
        return tuple(parse_line(v) for v in values)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _format_basis(basis: ProjectiveBasis) -> str:
    x, y, z = basis.direction
    return f"θ={basis.theta:.6f} φ={basis.phi:.6f} n=({x:+.6f}, {y:+.6f}, {z:+.6f})"


def format_report(report: MeasureReport) -> str:
    alice, bob = report.ea_saddle
    lines = [
        f"concurrence        {report.concurrence:.10f}",
        f"eof                {report.eof:.10f}",
        f"discord            {report.discord:.10f}",
        f"ea                 {report.ea:.10f}",
        f"mutual information {report.quantum_mutual_information:.10f}",
        f"ea alice basis     {_format_basis(alice)}",
        f"ea bob basis       {_format_basis(bob)}",
        f"discord bob basis  {_format_basis(report.discord_argmax)}",
    ]
    return "\n".join(lines)


def optimizer_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Flags shared by every command that evaluates states."""

    func = click.option("--oracle", is_flag=True, help="Use the brute-force oracle instead of pattern search.")(func)
    func = click.option("--tol", type=float, default=None, help="Pattern-search step tolerance (radians).")(func)
    func = click.option("--resolution", type=int, default=None, help="Coarse sphere-lattice resolution.")(func)
    func = click.option("--workers", type=int, default=None, help="Worker processes for row evaluation.")(func)
    func = click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")(func)
    return func


def create_cli(settings: Settings, open_repository: RepositoryFactory = CsvResultRepository) -> click.Group:
    """
    Build the `qaccord` command group wired to `settings` and a repository
    factory (a directory path in, a `ResultRepository` out).
    """

    def run_options(resolution: Optional[int], tol: Optional[float], workers: Optional[int], oracle: bool) -> RunOptions:
        try:
            config = settings.optimizer_config(resolution)
            if tol is not None:
                config = replace(config, step_tolerance=tol)
        except OutOfRange as exc:
            raise click.UsageError(f"invalid optimizer options: {exc}") from None
        if workers is not None and workers < 1:
            raise click.UsageError("--workers must be at least 1")
        return RunOptions(config=config, oracle=oracle, workers=settings.workers if workers is None else workers)

    def repository(out: Optional[str], default_name: str) -> ResultRepository:
        return open_repository(out or str(Path(settings.out_dir) / default_name))

    def report(result: ExperimentResult, repo: ResultRepository) -> None:
        if not result.success:
            _fail(result.error_message or "experiment failed", EXIT_USAGE)
        click.echo(f"results written to {repo.location}")
        for key, value in result.summary.items():
            click.echo(f"{key}: {value}")
        if result.figures:
            click.echo(f"figures: {', '.join(result.figures)}")

    @click.group(name="qaccord")
    @click.option("-v", "--verbose", is_flag=True, help="Log debug output to stderr.")
    def cli(verbose: bool) -> None:
        """Two-qubit correlation measures: entanglement, discord and entropic accord."""

        logging.basicConfig(level=logging.DEBUG if verbose else settings.log_level, format=LOG_FORMAT)

    @cli.command()
    @click.argument("state_file", type=click.Path(dir_okay=False))
    @optimizer_options
    @_exit_codes
    def measure(state_file: str, out: Optional[str], workers: Optional[int], resolution: Optional[int], tol: Optional[float], oracle: bool) -> None:
        """Evaluate every measure of the state in STATE_FILE."""

        parsed = load_state_file(state_file)
        options = run_options(resolution, tol, workers, oracle)
        repo = open_repository(out) if out else None
        result = experiments.run_measure(parsed.rho, options, repo, parsed.family, parsed.parameters, parsed.tagged)
        click.echo(format_report(result.rows[0].report))

    @cli.command("pure-upper-bound")
    @click.option("--grid", type=int, default=experiments.DEFAULT_GRID, show_default=True, help="Number of θ values on [0, π/2].")
    @optimizer_options
    @_exit_codes
    def pure_upper_bound(grid: int, out: Optional[str], workers: Optional[int], resolution: Optional[int], tol: Optional[float], oracle: bool) -> None:
        """Analytic pure-state curves against the optimized EA."""

        repo = repository(out, "pure-upper-bound")
        report(experiments.run_pure_upper_bound(repo, grid, run_options(resolution, tol, workers, oracle)), repo)

    @cli.command("pure-noise-sweep")
    @click.option("--grid", type=int, default=experiments.DEFAULT_GRID, show_default=True, help="Number of θ values on [0, π/4].")
    @click.option("--e-grid", type=int, default=None, help="Number of noise values on [0, 1] (defaults to --grid).")
    @optimizer_options
    @_exit_codes
    def pure_noise_sweep(grid: int, e_grid: Optional[int], out: Optional[str], workers: Optional[int], resolution: Optional[int], tol: Optional[float], oracle: bool) -> None:
        """Measures of pure states mixed with white noise."""

        repo = repository(out, "pure-noise-sweep")
        options = run_options(resolution, tol, workers, oracle)
        report(experiments.run_pure_noise_sweep(repo, grid, e_grid or grid, options), repo)

    @cli.group()
    def bell() -> None:
        """Experiments on the Bell-diagonal tetrahedron."""

    def bell_command(mode: str, help_text: str, with_lines: bool = False) -> None:
        @optimizer_options
        @click.option("--grid", type=int, default=experiments.DEFAULT_GRID, show_default=True, help="Points per line or raster side.")
        @_exit_codes
        def command(grid: int, out: Optional[str], workers: Optional[int], resolution: Optional[int], tol: Optional[float], oracle: bool, line: Sequence = ()) -> None:
            repo = repository(out, f"bell-{mode}")
            options = run_options(resolution, tol, workers, oracle)
            report(experiments.run_bell(repo, mode, grid, line, options), repo)

        command.__doc__ = help_text
        if with_lines:
            command = click.option(
                "--line",
                multiple=True,
                callback=_parse_lines,
                help="Extra transect c1,c2,c3:c1,c2,c3 (repeatable).",
            )(command)
        bell.command(mode)(command)

    bell_command("slices", "Werner, noisy, edge, face and vertex-to-face lines.")
    bell_command("face-plane", "Raster of the plane through (φ−+ψ+)/2, φ+ and ψ−.")
    bell_command("lines", "Transects from the ψ− vertex, plus any --line.", with_lines=True)

    @cli.command("random-scatter")
    @click.option("--count", type=int, default=experiments.DEFAULT_SCATTER_COUNT, show_default=True)
    @click.option("--measure", "measure_name", type=click.Choice(["haar", "bures"]), default="haar", show_default=True)
    @click.option("--seed", type=int, default=0, show_default=True)
    @optimizer_options
    @_exit_codes
    def random_scatter(count: int, measure_name: str, seed: int, out: Optional[str], workers: Optional[int], resolution: Optional[int], tol: Optional[float], oracle: bool) -> None:
        """Measures of random states with boundary envelopes."""

        repo = repository(out, "random-scatter")
        options = run_options(resolution, tol, workers, oracle)
        report(experiments.run_random_scatter(repo, count, measure_name, seed, options), repo)  # type: ignore[arg-type]

    @cli.command("hierarchy-audit")
    @click.option("--count", type=int, default=experiments.DEFAULT_AUDIT_COUNT, show_default=True, help="Haar and Bures states each.")
    @click.option("--seed", type=int, default=0, show_default=True)
    @click.option("--zero-tol", type=float, default=experiments.ZERO_TOLERANCE, show_default=True, help="Below this a measure counts as zero.")
    @click.option("--implied-tol", type=float, default=experiments.IMPLIED_TOLERANCE, show_default=True, help="A measure implied zero must stay below this.")
    @click.option("--lu-states", type=int, default=20, show_default=True, help="States checked for local-unitary invariance.")
    @click.option("--lu-trials", type=int, default=50, show_default=True, help="Random local unitaries per state.")
    @optimizer_options
    @_exit_codes
    def hierarchy_audit(
        count: int,
        seed: int,
        zero_tol: float,
        implied_tol: float,
        lu_states: int,
        lu_trials: int,
        out: Optional[str],
        workers: Optional[int],
        resolution: Optional[int],
        tol: Optional[float],
        oracle: bool,
    ) -> None:
        """Zero-set nesting and local-unitary invariance checks."""

        repo = repository(out, "hierarchy-audit")
        options = run_options(resolution, tol, workers, oracle)
        result = experiments.run_hierarchy_audit(
            repo, count, seed, zero_tol, implied_tol, lu_states, lu_trials, options
        )
        report(result, repo)
        for v in result.violations:
            click.echo(f"violation {v.check} [{v.family} #{v.index}]: {v.detail}", err=True)
        if result.violations:
            click.get_current_context().exit(EXIT_VIOLATIONS)

    @cli.command()
    @click.argument("directory", type=click.Path(file_okay=False, exists=True))
    def replot(directory: str) -> None:
        """Regenerate the figures of a run directory from its CSV files."""

        result = experiments.replot(open_repository(directory))
        if not result.success:
            _fail(result.error_message or "replot failed", EXIT_USAGE)
        click.echo(f"figures: {', '.join(result.figures)}")

    return cli
