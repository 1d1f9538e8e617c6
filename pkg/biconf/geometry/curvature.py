"""Riemann, Ricci and Weyl tensors.

Riemann convention: R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_rc G^r_db - G^a_rd G^r_cb.
Ricci contracts the first and third slots, R_ab = R^r_arb, which makes the
round sphere positively curved.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biconf.core.errors import DimensionTooSmall
from biconf.geometry.connection import ConnectionEval
from biconf.geometry.metric import MetricEval
from biconf.jets import Jet, einsum


def riemann_jet(gamma: Jet) -> Jet:
    """Curvature of any symmetric connection, one jet order below ``gamma``."""
    d_gamma = gamma.grad()
    g = gamma.truncate(d_gamma.order)
    return (
        einsum("adbc->abcd", d_gamma)
        - einsum("acbd->abcd", d_gamma)
        + einsum("arc,rdb->abcd", g, g)
        - einsum("ard,rcb->abcd", g, g)
    )


def ricci_jet(riemann: Jet) -> Jet:
    return einsum("rarb->ab", riemann)


def weyl_jet(riemann: Jet, g: Jet, ginv: Jet) -> Jet:
    """Mixed Weyl tensor C^a_bcd; identically zero in three dimensions."""
    n = g.shape[0]
    if n < 3:
        raise DimensionTooSmall(f"Weyl tensor needs n >= 3, got n={n}")
    order = riemann.order
    if n == 3:
        return Jet(np.zeros(riemann.coeffs.shape), riemann.n, order)
    g = g.truncate(order)
    ginv = ginv.truncate(order)
    ricci = ricci_jet(riemann)
    scalar = einsum("ab,ab->", ginv, ricci)
    lowered = einsum("ae,ebcd->abcd", g, riemann)
    ricci_part = (
        einsum("ac,bd->abcd", g, ricci)
        - einsum("ad,bc->abcd", g, ricci)
        - einsum("bc,ad->abcd", g, ricci)
        + einsum("bd,ac->abcd", g, ricci)
    )
    metric_part = einsum("ac,bd->abcd", g, g) - einsum("ad,bc->abcd", g, g)
    weyl = (
        lowered
        - ricci_part * (1.0 / (n - 2))
        + metric_part * scalar * (1.0 / ((n - 1) * (n - 2)))
    )
    return einsum("ae,ebcd->abcd", ginv, weyl)


@dataclass(frozen=True, eq=False)
class CurvatureEval:
    riemann_jet: Jet
    ricci_jet: Jet
    metric: MetricEval

    @property
    def riemann(self) -> np.ndarray:
        return self.riemann_jet.value

    @property
    def ricci(self) -> np.ndarray:
        return self.ricci_jet.value

    @cached_property
    def scalar(self) -> float:
        return float(np.einsum("ab,ab->", self.metric.ginv, self.ricci))

    @cached_property
    def weyl_jet(self) -> Jet:
        return weyl_jet(self.riemann_jet, self.metric.g_jet, self.metric.ginv_jet)

    @property
    def weyl(self) -> np.ndarray:
        return self.weyl_jet.value


def curvature(c: ConnectionEval, m: MetricEval) -> CurvatureEval:
    riemann = riemann_jet(c.gamma_jet)
    return CurvatureEval(riemann_jet=riemann, ricci_jet=ricci_jet(riemann), metric=m)
