"""The bi-conformal connection gamma_bar = Gamma + L and its covariant derivative."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biconf.biconformal.basis import BiconfBasis
from biconf.geometry.connection import ConnectionEval, covd
from biconf.geometry.metric import MetricEval
from biconf.geometry.projector import ProjectorEval
from biconf.jets import Jet, einsum


@dataclass(frozen=True, eq=False)
class BarConnectionEval:
    """L^a_bc and gamma_bar^a_bc as order-2 jets."""

    L: Jet
    gamma_bar_jet: Jet

    @property
    def gamma_bar(self) -> np.ndarray:
        return self.gamma_bar_jet.value

    @cached_property
    def d_gamma_bar(self) -> np.ndarray:
        return self.gamma_bar_jet.derivatives(1)

    @cached_property
    def d2_gamma_bar(self) -> np.ndarray:
        return self.gamma_bar_jet.derivatives(2)


def difference_tensor(m: MetricEval, proj: ProjectorEval, basis: BiconfBasis) -> Jet:
    """L^a_bc = (E_b P^a_c + E_c P^a_b)/2p + (W_b Pi^a_c + W_c Pi^a_b)/2q + S^ap M_pbc / 2."""
    p, q = proj.p, proj.q
    E, W = basis.E, basis.W
    S_uu = einsum("ae,eb->ab", proj.S_ud, m.ginv_jet)
    leaf = einsum("b,ac->abc", E, proj.P_ud) + einsum("c,ab->abc", E, proj.P_ud)
    complement = einsum("b,ac->abc", W, proj.Pi_ud) + einsum("c,ab->abc", W, proj.Pi_ud)
    return (
        leaf * (1.0 / (2 * p))
        + complement * (1.0 / (2 * q))
        + 0.5 * einsum("ap,pbc->abc", S_uu, basis.M)
    )


def bar_connection(
    m: MetricEval, c: ConnectionEval, proj: ProjectorEval, basis: BiconfBasis
) -> BarConnectionEval:
    L = difference_tensor(m, proj, basis)
    return BarConnectionEval(L=L, gamma_bar_jet=c.gamma_jet + L)


def bar_covd(field: Jet, valence: str, conn: BarConnectionEval) -> Jet:
    """Covariant derivative with respect to gamma_bar, derivative index first."""
    return covd(field, valence, conn.gamma_bar_jet)
