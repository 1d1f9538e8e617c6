"""Run corpus entries against their expectations."""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from pydantic import BaseModel

from biconf.analysis.bounds import dimension_bound
from biconf.analysis.classify import classify
from biconf.analysis.independence import independence_rank
from biconf.analysis.obstructions import report_from_evaluations
from biconf.analysis.rescale import rescale_invariance_check
from biconf.analysis.sampling import evaluate_samples, sample_points
from biconf.biconformal.bcvf import bcvf_check, bcvf_identity_suite
from biconf.biconformal.identities import static_identities
from biconf.core.config import settings
from biconf.core.errors import CorpusMismatch
from biconf.core.loggers.run_logger import get_run_logger
from biconf.core.logging import get_logger
from biconf.corpus.loader import Corpus, CorpusEntry
from biconf.dsl.validate import validate_spec

logger = get_logger(__name__)

# the Lie-derivative suite is costly; it runs on this many leading samples
SUITE_POINTS = 2


class EntryOutcome(BaseModel):
    """Summary of a passing corpus entry."""

    id: str
    points: int
    checks: int
    worst_identity: str
    worst_identity_residual: float


class _Expectations:
    def __init__(self, entry: CorpusEntry):
        self.entry = entry
        self.checks = 0

    def expect(self, condition: bool, subject: str, detail: str) -> None:
        self.checks += 1
        if not condition:
            raise CorpusMismatch(self.entry.id, subject, detail)


def run_entry(
    entry: CorpusEntry,
    points: int | None = None,
    seed: int | None = None,
    threshold: float | None = None,
) -> EntryOutcome:
    """Check every expectation of one entry, stopping at the first mismatch."""
    points = settings.run.points if points is None else points
    threshold = settings.run.threshold if threshold is None else threshold
    tolerances = settings.tolerances
    spec = validate_spec(entry.spec()).spec
    samples = sample_points(spec.domain, points, seed)
    evaluations = evaluate_samples(spec, samples)
    check = _Expectations(entry)

    report = classify(spec, samples, threshold, evaluations)
    for tier, expected in entry.tiers.items():
        got = report.tiers[tier]
        check.expect(got == expected, tier, f"expected {expected.value}, got {got.value}")

    for tensor_id in entry.vanishing:
        obstruction = report_from_evaluations(tensor_id, evaluations, threshold)
        check.expect(
            obstruction.vanishes,
            tensor_id,
            f"expected to vanish, max scaled residual {obstruction.max_scaled_residual:.3e}",
        )
    for tensor_id, floor in entry.nonzero.items():
        obstruction = report_from_evaluations(tensor_id, evaluations, threshold)
        check.expect(
            obstruction.max_scaled_residual > floor,
            tensor_id,
            f"expected > {floor:.1e}, max scaled residual "
            f"{obstruction.max_scaled_residual:.3e}",
        )

    worst_id, worst = "", 0.0
    for point in evaluations:
        for residual in static_identities(point, threshold):
            if residual.informational:
                continue
            if residual.scaled > worst:
                worst_id, worst = residual.id, residual.scaled
            check.expect(
                residual.scaled < tolerances.identity,
                residual.id,
                f"identity residual {residual.scaled:.3e} at {tuple(point.point)}",
            )

    for name in entry.vectors:
        for x in samples:
            witness = bcvf_check(spec, name, x)
            check.expect(
                witness.passed,
                name,
                f"bi-conformal residual {witness.residual:.3e} at {witness.point}",
            )
            for gauge, deviation, value in (
                ("phi", witness.declared_phi_deviation, witness.phi),
                ("chi", witness.declared_chi_deviation, witness.chi),
            ):
                if deviation is not None:
                    check.expect(
                        deviation < witness.tolerance * (1.0 + abs(value)),
                        f"{name}.{gauge}",
                        f"declared gauge off by {deviation:.3e} at {witness.point}",
                    )
        for x in samples.points[:SUITE_POINTS]:
            for residual in bcvf_identity_suite(spec, name, x):
                check.expect(
                    residual.informational or residual.scaled < tolerances.invariance,
                    f"{name}/{residual.id}",
                    f"Lie identity residual {residual.scaled:.3e}",
                )

    if entry.rank is not None:
        rank = independence_rank(spec, entry.vectors, samples)
        check.expect(rank == entry.rank, "rank", f"expected {entry.rank}, got {rank}")

    if entry.finite is not None:
        bound = dimension_bound(spec.dim, evaluations[0].p)
        check.expect(
            bound.finite == entry.finite,
            "finite",
            f"expected finite={entry.finite}, got {bound.finite}",
        )

    for pair in entry.rescale:
        rescaled = rescale_invariance_check(spec, pair.z, pair.x, samples)
        for quantity in rescaled.quantities:
            check.expect(
                quantity.scaled_deviation < tolerances.invariance,
                f"rescale[{pair.z}, {pair.x}].{quantity.quantity}",
                f"deviation {quantity.scaled_deviation:.3e}",
            )

    return EntryOutcome(
        id=entry.id,
        points=len(samples),
        checks=check.checks,
        worst_identity=worst_id,
        worst_identity_residual=worst,
    )


def _run_logged(entry: CorpusEntry, **options) -> EntryOutcome:
    run_log = get_run_logger()
    try:
        outcome = run_entry(entry, **options)
    except CorpusMismatch as exc:
        logger.error(str(exc))
        run_log.log_corpus_entry(entry.id, False, str(exc))
        raise
    logger.info(f"{entry.id}: {outcome.checks} checks passed")
    run_log.log_corpus_entry(entry.id, True, f"{outcome.checks} checks")
    return outcome


def run_corpus(
    corpus: Corpus,
    entry_ids: Sequence[str] | None = None,
    points: int | None = None,
    seed: int | None = None,
    threshold: float | None = None,
) -> list[EntryOutcome]:
    """Run the selected entries (all by default), results ordered by id.

    Entries run concurrently when more than one worker is configured; the
    first mismatch in id order is raised.
    """
    entries = (
        corpus.entries
        if entry_ids is None
        else sorted((corpus.get(i) for i in entry_ids), key=lambda e: e.id)
    )
    options = {"points": points, "seed": seed, "threshold": threshold}
    workers = settings.concurrency.workers
    if workers <= 1:
        return [_run_logged(entry, **options) for entry in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda entry: _run_logged(entry, **options), entries))
