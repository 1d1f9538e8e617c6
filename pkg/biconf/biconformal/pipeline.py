"""Per-point evaluation pipeline.

MetricEval -> ProjectorEval -> BiconfBasis -> BarConnectionEval ->
BarCurvatureEval -> FoliationObstructions, every stage computed on first use
and cached on the PointEvaluation.
"""

from collections.abc import Sequence
from functools import cached_property

import numpy as np

from biconf.biconformal.basis import BiconfBasis, biconf_basis
from biconf.biconformal.connection import BarConnectionEval, bar_connection
from biconf.biconformal.curvature import BarCurvatureEval, bar_curvature
from biconf.biconformal.foliation import FoliationObstructions
from biconf.dsl.ast import ManifoldSpec
from biconf.geometry.connection import ConnectionEval, christoffel
from biconf.geometry.curvature import CurvatureEval, curvature
from biconf.geometry.metric import MetricEval, eval_metric, metric_from_jet
from biconf.geometry.projector import ProjectorEval, projector_eval, projector_from_jet
from biconf.jets import Jet, max_abs


class PointEvaluation:
    """Every tensor of a (metric, projector) pair at one base point."""

    def __init__(
        self, metric: MetricEval, projector: ProjectorEval, spec: ManifoldSpec | None = None
    ):
        self.metric = metric
        self.projector = projector
        self.spec = spec

    @classmethod
    def at(cls, spec: ManifoldSpec, point: Sequence[float]) -> "PointEvaluation":
        m = eval_metric(spec, point)
        return cls(m, projector_eval(spec, m), spec)

    @classmethod
    def from_jets(cls, point: Sequence[float], g: Jet, P_dd: Jet) -> "PointEvaluation":
        """Pipeline for a metric and leaf projector given directly as jets."""
        m = metric_from_jet(g, point)
        return cls(m, projector_from_jet(P_dd, m))

    @property
    def point(self) -> np.ndarray:
        return self.metric.point

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def p(self) -> int:
        return self.projector.p

    @property
    def q(self) -> int:
        return self.projector.q

    @cached_property
    def connection(self) -> ConnectionEval:
        return christoffel(self.metric)

    @cached_property
    def curvature(self) -> CurvatureEval:
        return curvature(self.connection, self.metric)

    @cached_property
    def basis(self) -> BiconfBasis:
        return biconf_basis(self.connection, self.projector)

    @cached_property
    def bar(self) -> BarConnectionEval:
        return bar_connection(self.metric, self.connection, self.projector, self.basis)

    @cached_property
    def bar_curvature(self) -> BarCurvatureEval:
        return bar_curvature(self.metric, self.projector, self.basis, self.bar)

    @cached_property
    def foliation(self) -> FoliationObstructions:
        return FoliationObstructions(self.projector, self.basis, self.bar, self.bar_curvature)

    @cached_property
    def scale(self) -> float:
        """1 + max |R̄, g| at this point."""
        return 1.0 + max(max_abs(self.bar_curvature.riemann_bar), max_abs(self.metric.g))
