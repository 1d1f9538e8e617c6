"""biconf command-line interface."""

import functools
import logging
from pathlib import Path
from typing import Any, Literal

import click
import numpy as np
from pydantic import BaseModel, Field, ValidationError

from biconf.analysis import (
    IdentityOutcome,
    ObstructionReport,
    canonical_json,
    classify,
    dimension_bound,
    evaluate_samples,
    narrative,
    report_from_evaluations,
    rescale_invariance_check,
    sample_points,
)
from biconf.biconformal.bcvf import bcvf_check, bcvf_identity_suite
from biconf.biconformal.identities import static_identities
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.errors import BiconfError, CorpusMismatch, OutOfRange, RankExcluded
from biconf.core.loggers.run_logger import get_run_logger
from biconf.core.logging import get_logger
from biconf.core.tensor_registry import get_registry
from biconf.corpus import EntryOutcome, load_corpus, run_corpus
from biconf.corpus.runner import SUITE_POINTS
from biconf.dsl.ast import ManifoldSpec
from biconf.dsl.parser import parse_manifold
from biconf.dsl.validate import validate_spec

logger = get_logger(__name__)

EXIT_MISMATCH = 1
EXIT_INPUT = 2


class RunConfig(BaseModel):
    """Per-invocation run options layered over the settings defaults."""

    points: int = Field(default_factory=lambda: settings.run.points, ge=1)
    seed: int = Field(default_factory=lambda: settings.run.seed)
    threshold: float = Field(default_factory=lambda: settings.run.threshold, gt=0.0)
    tensors: list[str] = Field(default_factory=list)
    format: Literal["text", "canonical"] = "text"


class CheckOutput(BaseModel):
    manifold: str
    seed: int
    points: int
    reports: list[ObstructionReport]


class DumpOutput(BaseModel):
    manifold: str
    point: dict[str, float]
    tensors: dict[str, Any]
    excluded: list[str]


class IdentityOutput(BaseModel):
    manifold: str
    seed: int
    points: int
    identities: list[IdentityOutcome]


class BCVFOutput(BaseModel):
    manifold: str
    vector: str
    points: int
    max_residual: float
    tolerance: float
    passed: bool
    phi: float
    chi: float
    identities: list[IdentityOutcome]


class CorpusRunOutput(BaseModel):
    entries: list[EntryOutcome]


def _handle_errors(func):
    """Map library errors to exit statuses: mismatch 1, bad input 2."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except CorpusMismatch as e:
            logger.error(f"Corpus mismatch: {e}")
            click.echo(f"MISMATCH {e}", err=True)
            raise SystemExit(EXIT_MISMATCH) from e
        except (BiconfError, OSError, ValidationError) as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            raise SystemExit(EXIT_INPUT) from e

    return wrapper


def run_options(func):
    """Sampling and output options shared by the evaluation commands."""
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(["text", "canonical"]),
        default="text",
        show_default=True,
        help="Plain text or canonical JSON",
    )(func)
    func = click.option("--tol", type=float, help="Scaled vanishing threshold")(func)
    func = click.option("--seed", type=int, help="Sampling seed")(func)
    func = click.option("--points", type=int, help="Number of sample points")(func)
    return func


def _config(points, seed, tol, output_format, tensors=()) -> RunConfig:
    options: dict[str, Any] = {"format": output_format, "tensors": list(tensors)}
    for key, value in (("points", points), ("seed", seed), ("threshold", tol)):
        if value is not None:
            options[key] = value
    return RunConfig(**options)


def _load(path: str) -> ManifoldSpec:
    spec = parse_manifold(Path(path).read_text(encoding="utf-8"))
    validated = validate_spec(spec)
    for message in validated.warnings:
        click.echo(f"warning: {message}", err=True)
    return validated.spec


def _parse_point(spec: ManifoldSpec, text: str) -> list[float]:
    values: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or name.strip() not in spec.coords:
            raise OutOfRange(f"expected coordinate=value, got '{item}'")
        values[name.strip()] = float(value)
    missing = [c for c in spec.coords if c not in values]
    if missing:
        raise OutOfRange(f"--at is missing coordinates: {', '.join(missing)}")
    return [values[c] for c in spec.coords]


def _identity_outcomes(results) -> list[IdentityOutcome]:
    worst: dict[str, IdentityOutcome] = {}
    for residual in results:
        known = worst.get(residual.id)
        if known is None or residual.scaled > known.max_scaled_residual:
            worst[residual.id] = IdentityOutcome(
                id=residual.id,
                max_scaled_residual=residual.scaled,
                informational=residual.informational,
            )
    return list(worst.values())


def _echo_identities(outcomes: list[IdentityOutcome]) -> None:
    for outcome in outcomes:
        tag = "  (informational)" if outcome.informational else ""
        click.echo(f"  {outcome.id:<32} {outcome.max_scaled_residual:.3e}{tag}")


@click.group(invoke_without_command=True)
@click.option("--debug", is_flag=True, help="Verbose logging")
@click.pass_context
def cli(ctx, debug):
    """Bi-conformal geometry verification engine."""
    if debug:
        for name in list(logging.root.manager.loggerDict):
            if name.startswith("biconf"):
                logging.getLogger(name).setLevel(logging.DEBUG)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command()
@click.argument("file")
@click.option("--tensor", "tensor_list", default="", help="Comma-separated tensor ids")
@run_options
@_handle_errors
def check(file, tensor_list, points, seed, tol, output_format):
    """Evaluate obstruction tensors over sample points of FILE."""
    tensors = [t.strip() for t in tensor_list.split(",") if t.strip()]
    config = _config(points, seed, tol, output_format, tensors)
    spec = _load(file)
    samples = sample_points(spec.domain, config.points, config.seed)
    evaluations = evaluate_samples(spec, samples)
    n, p = evaluations[0].n, evaluations[0].p

    registry = get_registry()
    if config.tensors:
        selected = [registry.require(t) for t in config.tensors]
    else:
        selected = [
            t for t in registry.list_tensors() if not any(g.blocks(n, p) for g in t.guards)
        ]
    reports = [report_from_evaluations(t.id, evaluations, config.threshold) for t in selected]
    run_log = get_run_logger()
    for report in reports:
        run_log.log_report(spec.name, report.model_dump(mode="json"))

    if config.format == "canonical":
        output = CheckOutput(
            manifold=spec.name, seed=config.seed, points=config.points, reports=reports
        )
        click.echo(canonical_json(output))
        return
    click.echo(f"{spec.name}: n={n}, p={p}, {config.points} points, seed {config.seed}")
    for report in reports:
        click.echo(
            f"  {report.tensor:<20} max scaled {report.max_scaled_residual:.3e}  "
            f"{report.verdict}"
        )


@cli.command("classify")
@click.argument("file")
@run_options
@_handle_errors
def classify_command(file, points, seed, tol, output_format):
    """Classify FILE in the separability lattice."""
    config = _config(points, seed, tol, output_format)
    spec = _load(file)
    samples = sample_points(spec.domain, config.points, config.seed)
    report = classify(spec, samples, config.threshold)
    get_run_logger().log_classification(
        spec.name, {tier: status.value for tier, status in report.tiers.items()}
    )

    if config.format == "canonical":
        click.echo(canonical_json(report))
        return
    click.echo(f"{spec.name}: n={report.bounds.n}, p={report.bounds.p}")
    for line in narrative(report):
        click.echo(f"  {line}")
    click.echo("tensors:")
    for summary in report.tensors:
        click.echo(
            f"  {summary.id:<20} {summary.max_scaled_residual:.3e}  {summary.verdict}"
        )
    bounds = report.bounds
    click.echo(
        f"symmetry bound: {bounds.n_statement} (statement) / {bounds.n_proof} (proof), "
        f"finite={str(bounds.finite).lower()}"
    )
    for note in report.notes:
        click.echo(f"note: {note}")


@cli.command()
@click.argument("file")
@click.option("--at", "at", required=True, help="Point as x1=...,x2=...")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "canonical"]),
    default="text",
    show_default=True,
)
@_handle_errors
def dump(file, at, output_format):
    """Print every registered tensor of FILE at one point."""
    spec = _load(file)
    x = _parse_point(spec, at)
    point = PointEvaluation.at(spec, x)
    tensors: dict[str, np.ndarray] = {}
    excluded: list[str] = []
    for tensor in get_registry().list_tensors():
        try:
            tensors[tensor.id] = tensor.evaluate(point)
        except RankExcluded:
            excluded.append(tensor.id)

    if output_format == "canonical":
        output = DumpOutput(
            manifold=spec.name,
            point=dict(zip(spec.coords, x, strict=True)),
            tensors={k: v.tolist() for k, v in tensors.items()},
            excluded=excluded,
        )
        click.echo(canonical_json(output))
        return
    where = ", ".join(f"{c}={v:g}" for c, v in zip(spec.coords, x, strict=True))
    click.echo(f"{spec.name} at ({where})")
    for tensor_id, values in tensors.items():
        click.echo(f"{tensor_id} {values.shape}:")
        click.echo(np.array2string(values, precision=6, suppress_small=True))
    for tensor_id in excluded:
        click.echo(f"{tensor_id}: rank excluded")


@cli.group()
def corpus():
    """Built-in corpus of manifolds with known results."""


@corpus.command("list")
@_handle_errors
def corpus_list():
    """List corpus entries and where they come from."""
    for entry in load_corpus().entries:
        click.echo(f"{entry.id:<20} [{entry.kind}] {entry.citation}")
        click.echo(f"{'':<20} {entry.provenance}")


@corpus.command("run")
@click.option("--entry", "entries", multiple=True, help="Run only this entry (repeatable)")
@run_options
@_handle_errors
def corpus_run(entries, points, seed, tol, output_format):
    """Check every corpus expectation; exit 1 on the first mismatch."""
    config = _config(points, seed, tol, output_format)
    outcomes = run_corpus(
        load_corpus(),
        entry_ids=list(entries) or None,
        points=config.points,
        seed=config.seed,
        threshold=config.threshold,
    )
    if config.format == "canonical":
        click.echo(canonical_json(CorpusRunOutput(entries=outcomes)))
        return
    for outcome in outcomes:
        click.echo(
            f"PASS {outcome.id:<20} {outcome.checks} checks, worst identity "
            f"{outcome.worst_identity or '-'} {outcome.worst_identity_residual:.1e}"
        )
    click.echo(f"{len(outcomes)} entries passed")


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Manifold dimension")
@click.option("--p", "p", type=int, required=True, help="Leaf rank")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "canonical"]),
    default="text",
    show_default=True,
)
@_handle_errors
def nbound(n, p, output_format):
    """Upper bounds on the bi-conformal algebra dimension."""
    bound = dimension_bound(n, p)
    if output_format == "canonical":
        click.echo(canonical_json(bound))
        return
    click.echo(f"n={n}, p={p}")
    click.echo(f"  statement form: {bound.n_statement}")
    click.echo(f"  proof form:     {bound.n_proof}")
    click.echo(f"  finite:         {str(bound.finite).lower()}")
    click.echo(f"note: {bound.note}")


@cli.command()
def tensors():
    """List the registered obstruction tensors."""
    for tensor in get_registry().list_tensors():
        aliases = f" (aliases: {', '.join(tensor.aliases)})" if tensor.aliases else ""
        guards = ", ".join(g.denominator for g in tensor.guards)
        suffix = f"  [needs {guards} != 0]" if guards else ""
        click.echo(f"{tensor.id:<20} {tensor.description}{aliases}{suffix}")


@cli.command()
@click.argument("file")
@run_options
@_handle_errors
def identities(file, points, seed, tol, output_format):
    """Run the static identity battery of FILE at sample points."""
    config = _config(points, seed, tol, output_format)
    spec = _load(file)
    samples = sample_points(spec.domain, config.points, config.seed)
    results = [
        residual
        for point in evaluate_samples(spec, samples)
        for residual in static_identities(point, config.threshold)
    ]
    output = IdentityOutput(
        manifold=spec.name,
        seed=config.seed,
        points=config.points,
        identities=_identity_outcomes(results),
    )
    get_run_logger().log_report(spec.name, output.model_dump(mode="json"))
    if config.format == "canonical":
        click.echo(canonical_json(output))
        return
    click.echo(f"{spec.name}: {len(output.identities)} identities, {config.points} points")
    _echo_identities(output.identities)


@cli.command()
@click.argument("file")
@click.option("--vector", "vector", required=True, help="Declared vector name")
@run_options
@_handle_errors
def bcvf(file, vector, points, seed, tol, output_format):
    """Check a declared vector field of FILE and its Lie-derivative identities."""
    config = _config(points, seed, tol, output_format)
    spec = _load(file)
    samples = sample_points(spec.domain, config.points, config.seed)
    tolerance = settings.tolerances.bcvf if tol is None else config.threshold
    witnesses = [bcvf_check(spec, vector, x, tolerance) for x in samples]
    passed = all(w.passed for w in witnesses)
    # the identities presuppose the defining condition
    results = [
        residual
        for x in (samples.points[:SUITE_POINTS] if passed else [])
        for residual in bcvf_identity_suite(spec, vector, x, tolerance)
    ]
    first = witnesses[0]
    output = BCVFOutput(
        manifold=spec.name,
        vector=vector,
        points=config.points,
        max_residual=max(w.residual for w in witnesses),
        tolerance=tolerance,
        passed=passed,
        phi=first.phi,
        chi=first.chi,
        identities=_identity_outcomes(results),
    )
    if config.format == "canonical":
        click.echo(canonical_json(output))
        return
    click.echo(
        f"{spec.name}/{vector}: bi-conformal residual {output.max_residual:.3e} "
        f"over {config.points} points ({'pass' if output.passed else 'FAIL'} "
        f"at tolerance {tolerance:.1e})"
    )
    click.echo(
        f"  at {first.point}: phi={first.phi:.6g}, chi={first.chi:.6g}, "
        f"alpha={first.alpha:.6g}, beta={first.beta:.6g}"
    )
    _echo_identities(output.identities)


@cli.command()
@click.argument("file")
@click.option("--z", "z", required=True, help="Leaf factor Z")
@click.option("--x", "x", required=True, help="Complement factor X")
@run_options
@_handle_errors
def rescale(file, z, x, points, seed, tol, output_format):
    """Compare invariant tensors of (g, P) and (Z P + X Pi, Z P)."""
    config = _config(points, seed, tol, output_format)
    spec = _load(file)
    samples = sample_points(spec.domain, config.points, config.seed)
    report = rescale_invariance_check(spec, z, x, samples)
    if config.format == "canonical":
        click.echo(canonical_json(report))
        return
    click.echo(f"{spec.name}: Z={z}, X={x}, {config.points} points")
    for quantity in report.quantities:
        click.echo(
            f"  {quantity.quantity:<20} max {quantity.max_deviation:.3e}  "
            f"scaled {quantity.scaled_deviation:.3e}"
        )


def main():
    """Main entry point for the biconf CLI."""
    cli()


if __name__ == "__main__":
    main()
