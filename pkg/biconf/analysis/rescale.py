"""Invariance of the leaf obstructions under independent rescaling of the two blocks."""

import itertools
from collections.abc import Callable

import numpy as np

from biconf.analysis.reports import QuantityDeviation, RescaleReport
from biconf.analysis.sampling import SampleSet, parallel_map
from biconf.biconformal.curvature import T4_GUARDS, BarCurvatureEval, require_rank
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.errors import EvaluationError, NonPositiveRescale
from biconf.core.logging import get_logger
from biconf.dsl.ast import ExprNode, ManifoldSpec
from biconf.dsl.compiler import JetContext
from biconf.dsl.parser import parse_expression
from biconf.geometry.metric import eval_metric
from biconf.geometry.projector import projector_eval
from biconf.jets import Jet, max_abs

logger = get_logger(__name__)

# mixed placements only: these are unchanged by g -> Z P + X Π
QUANTITIES: dict[str, Callable[[BarCurvatureEval], Jet]] = {
    "Cpar": lambda c: c.Cpar,
    "Cperp": lambda c: c.Cperp,
    "nabla_bar_P_mixed": lambda c: c.nabla_bar_P_mixed,
    "nabla_bar_Pi_mixed": lambda c: c.nabla_bar_Pi_mixed,
    "Lambda": lambda c: c.Lambda,
    "Lambda_bar": lambda c: c.Lambda_bar,
}


def _coords(spec: ManifoldSpec, x) -> str:
    return ", ".join(f"{c}={v:.6g}" for c, v in zip(spec.coords, x, strict=True))


def _check_positive(
    spec: ManifoldSpec, label: str, node: ExprNode, samples: SampleSet
) -> None:
    corners = itertools.product(*spec.domain)
    for x in itertools.chain(samples, corners):
        try:
            value = float(JetContext(spec, x).eval(node).value)
        except EvaluationError as exc:
            logger.warning(f"{spec.name}: {label} skipped at {_coords(spec, x)}: {exc}")
            continue
        if not value > 0.0:
            coords = _coords(spec, x)
            raise NonPositiveRescale(f"{label} = {value:.6g} at {coords}")


def rescaled_pair(
    spec: ManifoldSpec, z: ExprNode, x: ExprNode, point
) -> tuple[PointEvaluation, PointEvaluation]:
    """Original and rescaled pipelines at one point.

    The rescaled pair is g' = Z P + X Π with leaf projector P' = Z P. It is
    assembled as g + (Z - 1) P + (X - 1) Π so that Z = X = 1 reproduces g
    bit for bit.
    """
    m = eval_metric(spec, point)
    projector = projector_eval(spec, m)
    context = JetContext(spec, point)
    dz = context.eval(z) - 1.0
    dx = context.eval(x) - 1.0
    g = m.g_jet + dz * projector.P_dd + dx * projector.Pi_dd
    P_dd = projector.P_dd + dz * projector.P_dd
    original = PointEvaluation(m, projector, spec)
    return original, PointEvaluation.from_jets(point, g, P_dd)


def rescale_invariance_check(
    spec: ManifoldSpec, z_text: str, x_text: str, samples: SampleSet
) -> RescaleReport:
    """Compare the rescale-invariant tensors of (g, P) and (Z P + X Π, Z P).

    Args:
        spec: Manifold with the base metric and projector.
        z_text: Leaf factor Z, an expression in the spec's names.
        x_text: Complement factor X.
        samples: Points at which both pairs are evaluated.

    Returns:
        Per-quantity deviations; each scaled by 1 + max |original| over samples.

    Raises:
        NonPositiveRescale: Z or X is not positive at a sample or domain corner.
        RankExcluded: ∥C/⊥C are undefined at this rank.
    """
    z = parse_expression(z_text, spec)
    x = parse_expression(x_text, spec)
    _check_positive(spec, "Z", z, samples)
    _check_positive(spec, "X", x, samples)

    pairs = parallel_map(lambda point: rescaled_pair(spec, z, x, point), samples)
    n, p = pairs[0][0].n, pairs[0][0].p
    require_rank("Cpar", T4_GUARDS, n, p)

    quantities = []
    for name, getter in QUANTITIES.items():
        deviation = 0.0
        size = 0.0
        for original, rescaled in pairs:
            before = getter(original.bar_curvature).value
            after = getter(rescaled.bar_curvature).value
            deviation = max(deviation, float(np.max(np.abs(after - before), initial=0.0)))
            size = max(size, max_abs(before))
        quantities.append(
            QuantityDeviation(
                quantity=name, max_deviation=deviation, scaled_deviation=deviation / (1.0 + size)
            )
        )

    report = RescaleReport(
        manifold=spec.name, z=z_text, x=x_text, points=len(samples), quantities=quantities
    )
    logger.info(
        f"{spec.name}: rescale Z={z_text}, X={x_text} max scaled deviation "
        f"{report.max_scaled_deviation:.3e}"
    )
    return report
