"""Pseudo-Riemannian machinery at a point: metric, connection, curvature, projectors, Lie derivatives."""

from biconf.geometry.connection import ConnectionEval, christoffel, christoffel_jet, covd
from biconf.geometry.curvature import CurvatureEval, curvature, riemann_jet, weyl_jet
from biconf.geometry.lie import lie_derivative, lie_derivative_connection
from biconf.geometry.metric import MetricEval, eval_metric, metric_from_jet
from biconf.geometry.projector import ProjectorEval, projector_eval, projector_from_jet

__all__ = [
    "ConnectionEval",
    "CurvatureEval",
    "MetricEval",
    "ProjectorEval",
    "christoffel",
    "christoffel_jet",
    "covd",
    "curvature",
    "eval_metric",
    "lie_derivative",
    "lie_derivative_connection",
    "metric_from_jet",
    "projector_eval",
    "projector_from_jet",
    "riemann_jet",
    "weyl_jet",
]
