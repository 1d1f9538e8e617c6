"""First-order tensors built from the derivative of the projector.

Index order follows the defining formulas: ``M[a, b, c] = M_abc`` with
M_abc = nabla_b P_ac + nabla_c P_ab - nabla_a P_bc, symmetric in (b, c).
"""

from dataclasses import dataclass
from functools import cached_property

from biconf.geometry.connection import ConnectionEval, covd
from biconf.geometry.projector import ProjectorEval
from biconf.jets import Jet, einsum


@dataclass(frozen=True, eq=False)
class BiconfBasis:
    """M, E, W, T and the projected parts A, B as order-2 jets."""

    nabla_P: Jet  # [a, b, c] = nabla_a P_bc
    M: Jet
    E: Jet
    W: Jet
    T: Jet
    projector: ProjectorEval

    @cached_property
    def A(self) -> Jet:
        """A_abc = P^d_a T_dbc."""
        return einsum("da,dbc->abc", self.projector.P_ud, self.T)

    @cached_property
    def B(self) -> Jet:
        """B_abc = Pi^d_a T_dbc."""
        return einsum("da,dbc->abc", self.projector.Pi_ud, self.T)

    @cached_property
    def A_up(self) -> Jet:
        """A^a_bc = P^ad T_dbc."""
        return einsum("ad,dbc->abc", self.projector.P_uu, self.T)

    @cached_property
    def B_up(self) -> Jet:
        return einsum("ad,dbc->abc", self.projector.Pi_uu, self.T)


def m_tensor(nabla_P: Jet) -> Jet:
    return einsum("bac->abc", nabla_P) + einsum("cab->abc", nabla_P) - nabla_P


def biconf_basis(c: ConnectionEval, proj: ProjectorEval) -> BiconfBasis:
    p, q = proj.p, proj.q
    nabla_P = covd(proj.P_dd, "dd", c.gamma_jet)
    M = m_tensor(nabla_P)
    E = einsum("acb,cb->a", M, proj.P_uu)
    W = -einsum("acb,cb->a", M, proj.Pi_uu)
    T = (
        M
        + einsum("a,bc->abc", W, proj.Pi_dd) * (1.0 / q)
        - einsum("a,bc->abc", E, proj.P_dd) * (1.0 / p)
    )
    return BiconfBasis(nabla_P=nabla_P, M=M, E=E, W=W, T=T, projector=proj)
