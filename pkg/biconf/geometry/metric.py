"""Metric components and their coordinate derivatives at a point."""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biconf.core.config import settings
from biconf.core.errors import SingularMetric
from biconf.dsl.ast import ManifoldSpec
from biconf.dsl.compiler import metric_jet
from biconf.jets import Jet, inv


@dataclass(frozen=True, eq=False)
class MetricEval:
    """g_ab and g^ab as order-3 jets at ``point``.

    Array views put derivative indexes last: ``dg[a, b, c] = d_c g_ab``.
    """

    point: np.ndarray
    g_jet: Jet
    ginv_jet: Jet

    @property
    def n(self) -> int:
        return len(self.point)

    @property
    def g(self) -> np.ndarray:
        return self.g_jet.value

    @property
    def ginv(self) -> np.ndarray:
        return self.ginv_jet.value

    @cached_property
    def dg(self) -> np.ndarray:
        return self.g_jet.derivatives(1)

    @cached_property
    def d2g(self) -> np.ndarray:
        return self.g_jet.derivatives(2)

    @cached_property
    def d3g(self) -> np.ndarray:
        return self.g_jet.derivatives(3)


def check_nondegenerate(g: np.ndarray, singular_tol: float) -> None:
    scale = max(1.0, float(np.max(np.abs(g))))
    det = float(np.linalg.det(g))
    if abs(det) < singular_tol * scale ** g.shape[0]:
        raise SingularMetric(f"metric is singular: det(g) = {det:.3e}")


def metric_from_jet(g: Jet, point: Sequence[float], singular_tol: float | None = None) -> MetricEval:
    tol = settings.tolerances.singular if singular_tol is None else singular_tol
    check_nondegenerate(g.value, tol)
    return MetricEval(point=np.asarray(point, dtype=float), g_jet=g, ginv_jet=inv(g, tol))


def eval_metric(spec: ManifoldSpec, point: Sequence[float]) -> MetricEval:
    """Evaluate the metric of a spec at a point (expression errors propagate)."""
    return metric_from_jet(metric_jet(spec, point), point)
