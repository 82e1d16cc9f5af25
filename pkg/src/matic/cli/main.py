"""
Main CLI entry point for MaTIC.

Provides the `matic` command-line interface using Click.
"""

import sys
from pathlib import Path

import click
import structlog

from matic import __version__
from matic.config import get_settings
from matic.errors import MaticError
from matic.monitoring import configure_logging
from matic.orchestrator.manifest import MAX_SEED

from .commands import COMMANDS

logger = structlog.get_logger(__name__)


@click.group()
@click.version_option(version=__version__, prog_name="MaTIC")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, MAX_SEED), help="Run seed (uint64)")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="Output directory for run artifacts")
@click.option("--format", "output_format", default="json", type=click.Choice(["json", "csv"]), help="Stdout format")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Log level (default: MATIC_LOG or the settings file)",
)
@click.pass_context
def cli(ctx, seed, out, output_format, log_level):
    """
    MaTIC - inferential-communication toolkit.

    Runs cognitive modules and networks, infers causal implicatures,
    measures non-stationary sources and checks stratified formulas.
    Every run writes metrics.csv, summary.json and timing.json to --out.
    """
    ctx.ensure_object(dict)
    try:
        settings = get_settings()
    except MaticError as e:
        click.echo(f"❌ Config error: {e.message}", err=True)
        sys.exit(e.exit_code)

    level = configure_logging(log_level or settings.log_level)
    ctx.obj["settings"] = settings
    ctx.obj["seed"] = seed
    ctx.obj["out"] = out or Path(settings.runs.output_dir)
    ctx.obj["format"] = output_format
    ctx.obj["log_level"] = level
    logger.debug("CLI initialised", seed=seed, out=str(ctx.obj["out"]), format=output_format)


for command in COMMANDS:
    cli.add_command(command)


if __name__ == "__main__":
    cli()
