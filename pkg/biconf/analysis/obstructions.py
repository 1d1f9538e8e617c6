"""Registered obstruction tensors and the per-tensor sample report."""

from collections.abc import Sequence

import numpy as np

from biconf.analysis.reports import ObstructionReport
from biconf.analysis.sampling import SampleSet, evaluate_samples
from biconf.biconformal.curvature import (
    COTTON0_GUARDS,
    COTTON1_GUARDS,
    L0_GUARDS,
    L1_GUARDS,
    T4_GUARDS,
)
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.logging import get_logger
from biconf.core.tensor_base import obstruction
from biconf.core.tensor_registry import get_registry
from biconf.dsl.ast import ManifoldSpec
from biconf.jets import max_abs

logger = get_logger(__name__)


@obstruction("gradP", "Levi-Civita derivative ∇_a P_bc (vanishes iff decomposable)")
def grad_p(point: PointEvaluation) -> np.ndarray:
    return point.basis.nabla_P.value


@obstruction("M", "M_abc = ∇_b P_ac + ∇_c P_ab - ∇_a P_bc")
def m_tensor(point: PointEvaluation) -> np.ndarray:
    return point.basis.M.value


@obstruction("E", "E_a = M_acb P^cb")
def e_form(point: PointEvaluation) -> np.ndarray:
    return point.basis.E.value


@obstruction("W", "W_a = -M_acb Π^cb")
def w_form(point: PointEvaluation) -> np.ndarray:
    return point.basis.W.value


@obstruction(
    "Tabc",
    "T_abc, trace-free part of M (vanishes iff conformally separable)",
    aliases=("T_abc", "T"),
)
def t_tensor(point: PointEvaluation) -> np.ndarray:
    return point.basis.T.value


@obstruction("L", "difference tensor L^a_bc between the bi-conformal and metric connections")
def difference(point: PointEvaluation) -> np.ndarray:
    return point.bar.L.value


@obstruction("gamma_bar", "bi-conformal connection coefficients")
def gamma_bar(point: PointEvaluation) -> np.ndarray:
    return point.bar.gamma_bar


@obstruction("riemann_bar", "curvature R̄^a_bcd of the bi-conformal connection")
def riemann_bar(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.riemann_bar.value


@obstruction("L0", "leaf tensor L⁰_bc", guards=L0_GUARDS)
def l0(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.L0.value


@obstruction("L1", "complement tensor L¹_bc", guards=L1_GUARDS)
def l1(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.L1.value


@obstruction("T4", "T^d_cab (vanishes iff bi-conformally flat, given T_abc = 0)", guards=T4_GUARDS)
def t4(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.T4.value


@obstruction("Cpar", "∥C, T4 projected onto the leaf", guards=T4_GUARDS)
def c_par(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Cpar.value


@obstruction("Cperp", "⊥C, T4 projected onto the complement", guards=T4_GUARDS)
def c_perp(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Cperp.value


@obstruction("Lambda", "Λ^d_bc = 2 P^dr ∇̄_r P_bc")
def lambda_tensor(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Lambda.value


@obstruction("Lambda_bar", "Λ̄^d_bc = 2 Π^dr ∇̄_r Π_bc")
def lambda_bar(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Lambda_bar.value


@obstruction("Upsilon", "ϒ_b^sc")
def upsilon(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Upsilon.value


@obstruction("Upsilon_bar", "ϒ̄_b^sc")
def upsilon_bar(point: PointEvaluation) -> np.ndarray:
    return point.bar_curvature.Upsilon_bar.value


@obstruction("cotton0", "∇̄_[a L⁰_b]c (rank-3 leaf conformal flatness)", guards=COTTON0_GUARDS)
def cotton0(point: PointEvaluation) -> np.ndarray:
    return point.foliation.cotton0.value


@obstruction(
    "cotton0_projected", "cotton0 with every index projected onto the leaf", guards=COTTON0_GUARDS
)
def cotton0_projected(point: PointEvaluation) -> np.ndarray:
    return point.foliation.cotton0_projected.value


@obstruction("cotton1", "∇̄_[a L¹_b]c (rank-3 complement conformal flatness)", guards=COTTON1_GUARDS)
def cotton1(point: PointEvaluation) -> np.ndarray:
    return point.foliation.cotton1.value


@obstruction(
    "cotton1_projected",
    "cotton1 with every index projected onto the complement",
    guards=COTTON1_GUARDS,
)
def cotton1_projected(point: PointEvaluation) -> np.ndarray:
    return point.foliation.cotton1_projected.value


@obstruction("u", "u_a = E_a/2p + W_a/2(n-p)")
def u_form(point: PointEvaluation) -> np.ndarray:
    return point.foliation.u.value


@obstruction("du", "∂_[a u_b] (vanishes when the two conformal factors agree)")
def du(point: PointEvaluation) -> np.ndarray:
    return point.foliation.du.value


def report_from_evaluations(
    tensor_id: str,
    evaluations: Sequence[PointEvaluation],
    threshold: float | None = None,
) -> ObstructionReport:
    """Build an ObstructionReport from already evaluated points.

    Args:
        tensor_id: Registered tensor id or alias.
        evaluations: Evaluated sample points (at least one).
        threshold: Scaled vanishing threshold, defaulting to the run setting.

    Returns:
        The report, with residuals divided by 1 + max |R̄, g| over the samples.
    """
    threshold = settings.run.threshold if threshold is None else threshold
    tensor = get_registry().require(tensor_id)
    first = evaluations[0]
    tensor.check_rank(first.n, first.p)
    scale = max(point.scale for point in evaluations)
    per_point = [max_abs(tensor.evaluate(point)) / scale for point in evaluations]
    worst = max(per_point)
    return ObstructionReport(
        tensor=tensor.id,
        per_point=per_point,
        max_scaled_residual=worst,
        scale=scale,
        threshold=threshold,
        verdict="vanishes" if worst < threshold else "nonzero",
    )


def obstruction_report(
    spec: ManifoldSpec,
    tensor_id: str,
    samples: SampleSet,
    threshold: float | None = None,
) -> ObstructionReport:
    """Evaluate one registered tensor over a sample set."""
    report = report_from_evaluations(tensor_id, evaluate_samples(spec, samples), threshold)
    logger.info(
        f"{spec.name}: {report.tensor} max scaled residual "
        f"{report.max_scaled_residual:.3e} ({report.verdict})"
    )
    return report
