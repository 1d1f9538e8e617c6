"""Separability classification from the obstruction battery."""

from collections.abc import Sequence

from biconf.analysis.bounds import dimension_bound
from biconf.analysis.obstructions import report_from_evaluations
from biconf.analysis.reports import ClassificationReport, ObstructionReport, TensorSummary
from biconf.analysis.sampling import SampleSet, evaluate_samples
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.errors import RankExcluded
from biconf.core.logging import get_logger
from biconf.core.types import TierStatus
from biconf.dsl.ast import ManifoldSpec

logger = get_logger(__name__)

TIERS = (
    "decomposable",
    "conformally_separable",
    "conformally_reducible",
    "leaf_P_conformally_flat",
    "leaf_Pi_conformally_flat",
    "bi_conformally_flat",
)

_NARRATIVE = {
    "decomposable": "∇P = 0: each block depends only on its own coordinates",
    "conformally_separable": "T_abc = 0: both foliations are totally umbilical",
    "conformally_reducible": "T_abc = 0 and u_a is closed: one conformal factor serves both blocks",
    "leaf_P_conformally_flat": "the leaf metric is conformally flat",
    "leaf_Pi_conformally_flat": "the complement leaf metric is conformally flat",
    "bi_conformally_flat": "conformally separable with both leaf metrics conformally flat",
}


def leaf_criterion(rank: int, side: str) -> str | None:
    """Tensor deciding conformal flatness of a leaf of the given rank, or None."""
    if rank in (1, 2):
        return None
    if rank == 3:
        return "cotton0_projected" if side == "P" else "cotton1_projected"
    return "Cpar" if side == "P" else "Cperp"


def narrative(report: ClassificationReport) -> list[str]:
    """One human-readable line per tier."""
    lines = []
    for tier in TIERS:
        status = report.tiers[tier]
        text = _NARRATIVE[tier]
        if status is TierStatus.YES:
            lines.append(f"{tier.replace('_', ' ')}: yes ({text})")
        elif status is TierStatus.NO:
            lines.append(f"{tier.replace('_', ' ')}: no")
        else:
            lines.append(f"{tier.replace('_', ' ')}: indeterminate")
    return lines


def classify(
    spec: ManifoldSpec,
    samples: SampleSet,
    threshold: float | None = None,
    evaluations: Sequence[PointEvaluation] | None = None,
) -> ClassificationReport:
    """Run the obstruction battery and assemble the tier flags.

    Leaf flags are decided by ∥C/⊥C for rank >= 4 and by the projected
    cotton tensors for rank 3. They are only meaningful on conformally
    separable metrics and are "indeterminate" otherwise, as are leaves of
    rank 1 and 2.

    ``evaluations`` may carry already evaluated sample points.
    """
    threshold = settings.run.threshold if threshold is None else threshold
    points = evaluate_samples(spec, samples) if evaluations is None else evaluations
    n, p = points[0].n, points[0].p
    reports: dict[str, ObstructionReport] = {}
    notes: list[str] = []

    def run(tensor_id: str) -> ObstructionReport | None:
        try:
            reports[tensor_id] = report_from_evaluations(tensor_id, points, threshold)
        except RankExcluded as exc:
            notes.append(str(exc))
            return None
        return reports[tensor_id]

    def vanishes(tensor_id: str) -> bool:
        report = run(tensor_id)
        return report is not None and report.vanishes

    gradient_free = vanishes("gradP")
    separable = vanishes("Tabc")
    reducible = separable and vanishes("du")
    # tiers nest: decomposable => reducible => separable
    decomposable = gradient_free and reducible
    if gradient_free and not decomposable:
        notes.append("decomposable: gradP is below threshold but a weaker tier fails")

    tiers = {
        "decomposable": TierStatus.of(decomposable),
        "conformally_separable": TierStatus.of(separable),
        "conformally_reducible": TierStatus.of(reducible),
    }
    for tier, rank, side in (
        ("leaf_P_conformally_flat", p, "P"),
        ("leaf_Pi_conformally_flat", n - p, "Pi"),
    ):
        criterion = leaf_criterion(rank, side)
        report = run(criterion) if criterion else None
        if criterion is None:
            notes.append(f"{tier}: no conformal-flatness criterion for a rank-{rank} leaf")
        if report is None:
            tiers[tier] = TierStatus.INDETERMINATE
        elif not separable:
            notes.append(f"{tier}: {criterion} decides leaf flatness on separable metrics only")
            tiers[tier] = TierStatus.INDETERMINATE
        else:
            tiers[tier] = TierStatus.of(report.vanishes)

    leaves = (tiers["leaf_P_conformally_flat"], tiers["leaf_Pi_conformally_flat"])
    if not separable or TierStatus.NO in leaves:
        flat = TierStatus.NO
    elif TierStatus.INDETERMINATE in leaves:
        flat = TierStatus.INDETERMINATE
    else:
        flat = TierStatus.YES
    t4 = run("T4") if separable else None
    if t4 is not None and not t4.vanishes and flat is not TierStatus.NO:
        notes.append("bi_conformally_flat: T4 does not vanish")
        flat = TierStatus.NO
    tiers["bi_conformally_flat"] = flat

    result = ClassificationReport(
        manifold=spec.name,
        seed=samples.seed,
        points=len(samples),
        threshold=threshold,
        tensors=[
            TensorSummary(
                id=r.tensor, max_scaled_residual=r.max_scaled_residual, verdict=r.verdict
            )
            for r in reports.values()
        ],
        tiers=tiers,
        bounds=dimension_bound(n, p),
        notes=sorted(set(notes)),
    )
    logger.info(f"{spec.name}: {', '.join(f'{k}={v.value}' for k, v in tiers.items())}")
    return result
