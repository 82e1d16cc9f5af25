"""
Subcommands of the MaTIC CLI.

Every command turns its options into a RunManifest and hands it to the
orchestrator; stdout receives summary.json (or metrics.csv with
`--format csv`), stderr the status line.
"""

import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
import structlog

from matic.errors import MaticError
from matic.orchestrator import build_manifest, run

logger = structlog.get_logger(__name__)

FilePath = click.Path(dir_okay=False, path_type=Path)
DEMOS = ("garage", "receiver", "bandit", "character")


def _fail(error: MaticError) -> None:
    click.echo(f"❌ {error.category.capitalize()} error: {error.message}", err=True)
    sys.exit(error.exit_code)


def execute(
    ctx: click.Context,
    command: str,
    inputs: Optional[Dict[str, Optional[Path]]] = None,
    params: Optional[Dict[str, Any]] = None,
) -> None:
    """Run one subcommand through the orchestrator and report the outcome."""
    obj = ctx.obj
    try:
        manifest = build_manifest(
            command=command,
            seed=obj["seed"],
            out_dir=obj["out"],
            inputs={k: v for k, v in (inputs or {}).items() if v is not None},
            params={k: v for k, v in (params or {}).items() if v is not None},
            output_format=obj["format"],
        )
    except MaticError as e:
        _fail(e)
        return
    outcome = run(manifest, obj["settings"])
    if not outcome.ok:
        assert outcome.error is not None
        _fail(outcome.error)
        return
    if manifest.output_format == "csv":
        click.echo(outcome.files["metrics"].read_text(encoding="utf-8"), nl=False)
    else:
        click.echo(outcome.files["summary"].read_text(encoding="utf-8"), nl=False)
    click.echo(f"✅ {command} finished, artifacts in {manifest.out_dir}", err=True)


# Traces

@click.group("trace")
def trace_group():
    """Inspect event traces."""


@trace_group.command("validate")
@click.argument("trace", type=FilePath)
@click.option("--chain", help="Comma-separated event ids to check as a chain")
@click.pass_context
def trace_validate(ctx, trace, chain):
    """
    Validate a trace file.

    Examples:
        matic trace validate scenarios/garage_trace.json --chain e1,e2,e3
    """
    chain_ids = [c for c in chain.split(",") if c] if chain else None
    execute(ctx, "trace validate", {"trace": trace}, {"chain": chain_ids})


# GCMs and networks

@click.group("gcm")
def gcm_group():
    """Run single General Cognitive Modules."""


@gcm_group.command("run")
@click.argument("config", type=FilePath)
@click.option("--signals", type=FilePath, help="Input signals file (p, n, r, l)")
@click.option("--ticks", type=click.IntRange(min=0), help="Number of ticks")
@click.option("--slow-period", type=click.IntRange(min=1), help="Ticks between slow updates (K)")
@click.pass_context
def gcm_run(ctx, config, signals, ticks, slow_period):
    """Run one GCM over its input signals."""
    execute(ctx, "gcm run", {"gcm": config, "signals": signals}, {"ticks": ticks, "slow_period": slow_period})


@click.group("net")
def net_group():
    """Check cognitive networks."""


@net_group.command("check")
@click.argument("network", type=FilePath)
@click.option("--stimuli", type=FilePath, help="Stimuli file: read one node's output as a predicate")
@click.option("--threshold", type=click.FloatRange(0.0, 1.0), help="Crisp predicate threshold (theta)")
@click.pass_context
def net_check(ctx, network, stimuli, threshold):
    """Report circularity, levels and binary-agent status of a network."""
    execute(ctx, "net check", {"network": network, "stimuli": stimuli}, {"threshold": threshold})


# Implicatures and information metrics

def _context_options(fn):
    fn = click.option("--horizon", type=click.IntRange(min=0), help="Latest predecessors counted per event")(fn)
    fn = click.option("--smoothing", type=click.FloatRange(min=0.0), help="Laplace constant")(fn)
    fn = click.option("-k", "k", type=click.IntRange(min=0), help="Maximum context size")(fn)
    fn = click.option("--model", type=FilePath, help="Saved conditional model")(fn)
    fn = click.option("--corpus", type=FilePath, help="Training corpus")(fn)
    return fn


@click.command("infer")
@click.option("--trace", "trace", type=FilePath, required=True, help="Trace holding the event")
@click.option("--event", help="Event to explain (default: the last one)")
@click.option("--bank", is_flag=True, help="Cross-check with the GCM bank construction")
@_context_options
@click.pass_context
def infer_command(ctx, trace, event, bank, corpus, model, k, smoothing, horizon):
    """
    Infer the implied cause of an event.

    Examples:
        matic infer --trace t.json --corpus c.json --event e3
    """
    execute(
        ctx,
        "infer",
        {"trace": trace, "corpus": corpus, "model": model},
        {"event": event, "k": k, "smoothing": smoothing, "horizon": horizon, "bank": bank or None},
    )


@click.command("entropy")
@click.option("--trace", "trace", type=FilePath, required=True, help="Trace to profile")
@click.option("--selector", help="Context selector: window:K or ids:a,b")
@click.option("--scenario", type=FilePath, help="Source scenario giving explicit possible sets")
@_context_options
@click.pass_context
def entropy_command(ctx, trace, selector, scenario, corpus, model, k, smoothing, horizon):
    """Entropy of the next-symbol distribution at every event of a trace."""
    execute(
        ctx,
        "entropy",
        {"trace": trace, "corpus": corpus, "model": model, "scenario": scenario},
        {"selector": selector, "k": k, "smoothing": smoothing, "horizon": horizon},
    )


@click.command("stationarity")
@click.option("--scenario", type=FilePath, help="Source scenario to generate from")
@click.option("--corpus", type=FilePath, help="Recorded traces")
@click.option("--window", type=click.IntRange(min=1), help="Window length in ticks")
@click.option("--tau", type=click.FloatRange(min=0.0), help="Divergence threshold in bits")
@click.pass_context
def stationarity_command(ctx, scenario, corpus, window, tau):
    """
    Test whether a source keeps its symbol distribution over time.

    Examples:
        matic stationarity --scenario scenarios/context_switch.json
    """
    if scenario is None and corpus is None:
        raise click.UsageError("Give --scenario or --corpus")
    execute(ctx, "stationarity", {"scenario": scenario, "corpus": corpus}, {"window": window, "tau": tau})


@click.group("model")
def model_group():
    """Train conditional models."""


@model_group.command("fit")
@click.option("--corpus", type=FilePath, required=True, help="Training corpus")
@click.option("-k", "k", type=click.IntRange(min=0), help="Maximum context size")
@click.option("--smoothing", type=click.FloatRange(min=0.0), help="Laplace constant")
@click.option("--horizon", type=click.IntRange(min=0), help="Latest predecessors counted per event")
@click.pass_context
def model_fit(ctx, corpus, k, smoothing, horizon):
    """Fit a conditional model; writes model.json next to the summary."""
    execute(ctx, "model fit", {"corpus": corpus}, {"k": k, "smoothing": smoothing, "horizon": horizon})


# Logic

@click.group("logic")
def logic_group():
    """Check stratification and apply the I/S/T rewrites."""


def _formula_inputs(formula: Optional[str], file: Optional[Path]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    if (formula is None) == (file is None):
        raise click.UsageError("Give either a FORMULA argument or --file")
    return {"formulas": file}, {"formula": formula}


@logic_group.command("check")
@click.argument("formula", required=False)
@click.option("--file", "file", type=FilePath, help="Formula file, one formula or definition per line")
@click.pass_context
def logic_check(ctx, formula, file):
    """
    Stratification and internal/external status of formulas.

    Examples:
        matic logic check "x in [x, y]"
    """
    inputs, params = _formula_inputs(formula, file)
    execute(ctx, "logic check", inputs, params)


@logic_group.command("transfer")
@click.argument("formula", required=False)
@click.option("--file", "file", type=FilePath, help="Formula file, one formula or definition per line")
@click.option(
    "--rule",
    type=click.Choice(["transference", "reverse", "idealisation"]),
    default="transference",
    show_default=True,
)
@click.option("--standard", "standard", multiple=True, help="Parameters declared standard (repeatable or comma separated)")
@click.pass_context
def logic_transfer(ctx, formula, file, rule, standard):
    """
    Apply a rewrite rule and report whether it is legal.

    Examples:
        matic logic transfer "forall^st n . n <= n * 1"
    """
    inputs, params = _formula_inputs(formula, file)
    params.update(rule=rule, standard=[s for item in standard for s in item.split(",") if s])
    execute(ctx, "logic transfer", inputs, params)


# Demos

@click.command("demo")
@click.argument("name", type=click.Choice(DEMOS))
@click.option("--scenario", type=FilePath, help="Scenario file replacing the shipped one")
@click.pass_context
def demo_command(ctx, name, scenario):
    """
    Run a reference agent.

    Examples:
        matic demo garage --seed 7
        matic demo receiver --scenario my_receiver.json
    """
    execute(ctx, f"demo {name}", {"scenario": scenario})


COMMANDS = (
    trace_group,
    gcm_group,
    net_group,
    infer_command,
    entropy_command,
    stationarity_command,
    model_group,
    logic_group,
    demo_command,
)
