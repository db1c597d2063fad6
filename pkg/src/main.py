import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError

from src.exceptions import ConformalBMException, ValidationError
from src.models.schemas import RunConfig, VerificationReport
from src.proofs.runner import ProofRunner, ProofRunResult

load_dotenv()

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool) -> None:
    level = "INFO" if verbose else os.environ.get("LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def build_config(command: str, config_path: Optional[Path] = None, **flags) -> RunConfig:
    """Merge a JSON config file with command-line flags; flags win.

    Args:
        command: Command being run
        config_path: Optional RunConfig JSON file
        **flags: Flag values, None when not given

    Returns:
        Validated RunConfig

    Raises:
        ValidationError: On conflicting flags or values failing RunConfig's constraints
    """
    overrides = {k: v for k, v in flags.items() if v is not None}
    if "trunc" in overrides and "eps" in overrides:
        raise ValidationError("--trunc and --eps are alternatives; give at most one", field="trunc")
    try:
        data = RunConfig.model_validate_json(config_path.read_text(encoding="utf-8")).model_dump() if config_path else {}
        if "eps" in overrides:
            data.pop("trunc", None)
        return RunConfig(**{**data, **overrides, "command": command})
    except PydanticValidationError as e:
        raise ValidationError(f"Invalid run configuration: {e}") from e


def _print_table(result: ProofRunResult) -> None:
    click.echo(f"{'check':<46} {'computed':>20} {'reference':>20} {'abs err':>10} {'tol':>10}  result")
    for r in result.reports:
        verdict = "PASS" if r.passed else "FAIL"
        click.echo(
            f"{r.check_name:<46} {r.computed_value:>20.12g} {r.reference_value:>20.12g} "
            f"{r.absolute_error:>10.3g} {r.tolerance:>10.3g}  {verdict}"
        )
    failed = len(result.get_failed_reports())
    click.echo(f"{len(result.reports) - failed} passed, {failed} failed")


def _execute(command: str, verbose: bool, **options) -> None:
    _configure_logging(verbose)
    ctx = click.get_current_context()
    try:
        cfg = build_config(command, **options)
        logger.info(f"Running {command} with {cfg.model_dump_json()}")
        result = ProofRunner().run(command, cfg)
        _print_table(result)
        if cfg.json_path:
            result.write_json(cfg.json_path)
        if cfg.csv_path:
            result.write_csv(cfg.csv_path)
    except ConformalBMException as exc:
        logger.error(f"{exc.__class__.__name__}: {exc.message}")
        click.echo(f"Error: {exc.message}", err=True)
        ctx.exit(exc.exit_code)
    except OSError as exc:
        logger.error(f"Could not write output: {exc}")
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(1)
    except Exception as exc:
        logger.error(f"Unexpected error: {str(exc)}")
        click.echo(f"Error: an unexpected error occurred ({exc})", err=True)
        ctx.exit(1)
    ctx.exit(0 if result.is_valid() else 1)


def run_options(f):
    """Options shared by every command."""
    options = [
        click.option("--samples", type=click.IntRange(min=1), default=None,
                     help="Monte Carlo sample count (default: 1e5 for exit laws, 1e6 for exit times)"),
        click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None, envvar="CONFORMAL_BM_SEED",
                     help="Seed of the random streams [env: CONFORMAL_BM_SEED]"),
        click.option("--dt", type=float, default=None, help="Time step of discretized paths (default 1e-4)"),
        click.option("--trunc", type=click.IntRange(min=1), default=None, help="Fixed truncation N for series"),
        click.option("--eps", type=float, default=None, help="Target tail bound when N is not fixed (default 1e-8)"),
        click.option("--json", "json_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Write full reports as JSON"),
        click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Write density comparison series as CSV"),
        click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads; results do not change"),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                     default=None, help="RunConfig JSON file; flags override it"),
        click.option("--verbose", "-v", is_flag=True, default=False, help="Log progress to stderr"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


@click.group()
def cli():
    """Check sum 1/n^2 = pi^2/6 with conformal maps and Brownian motion."""


@cli.command()
@run_options
def proof1(**options):
    """Expected exit time from a strip."""
    _execute("proof1", **options)


@cli.command()
@run_options
def proof2(**options):
    """Exit distribution from a disk."""
    _execute("proof2", **options)


@cli.command()
@run_options
def proof3(**options):
    """Exit distribution from a strip."""
    _execute("proof3", **options)


@cli.command()
@run_options
def proof4(**options):
    """Green's function of a disk."""
    _execute("proof4", **options)


@cli.command("all")
@run_options
def run_all(**options):
    """Run proof1 to proof4."""
    _execute("all", **options)


@cli.command("estimate-basel")
@run_options
def estimate_basel(**options):
    """The four estimates of pi^2/6 checked as one report."""
    _execute("estimate-basel", **options)


def _reports(command: str, cfg: RunConfig) -> List[VerificationReport]:
    return ProofRunner().run(command, cfg).reports


def cmd_proof1(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("proof1", cfg)


def cmd_proof2(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("proof2", cfg)


def cmd_proof3(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("proof3", cfg)


def cmd_proof4(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("proof4", cfg)


def cmd_all(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("all", cfg)


def cmd_estimate_basel(cfg: RunConfig) -> List[VerificationReport]:
    return _reports("estimate-basel", cfg)


if __name__ == "__main__":
    cli()
