"""Tensors built on a metric with an orthogonal projector pair."""

from biconf.biconformal.basis import BiconfBasis, biconf_basis
from biconf.biconformal.connection import BarConnectionEval, bar_connection, bar_covd
from biconf.biconformal.curvature import BarCurvatureEval, bar_curvature
from biconf.biconformal.foliation import FoliationObstructions, leaf_cotton_oracle, leaf_weyl
from biconf.biconformal.pipeline import PointEvaluation

__all__ = [
    "BarConnectionEval",
    "BarCurvatureEval",
    "BiconfBasis",
    "FoliationObstructions",
    "PointEvaluation",
    "bar_connection",
    "bar_covd",
    "bar_curvature",
    "biconf_basis",
    "leaf_cotton_oracle",
    "leaf_weyl",
]
