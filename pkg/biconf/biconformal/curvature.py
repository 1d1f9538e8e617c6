"""Curvature of the bi-conformal connection and the tensors built from it.

Index orders: ``riemann_bar[a, b, c, d] = R̄^a_bcd``; ``T4[d, c, a, b] = T^d_cab``
and likewise for ``Cpar``/``Cperp``; ``Lambda[d, b, c] = Λ^d_bc``;
``Upsilon[b, s, c] = ϒ_b^sc``. Leaf-side quantities carry a 0 suffix,
complement-side quantities a 1 suffix.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from biconf.biconformal.basis import BiconfBasis
from biconf.biconformal.connection import BarConnectionEval, bar_covd
from biconf.core.errors import RankExcluded
from biconf.core.types import RankGuard
from biconf.geometry.curvature import riemann_jet
from biconf.geometry.metric import MetricEval
from biconf.geometry.projector import ProjectorEval
from biconf.jets import Jet, einsum

L0_GUARDS = (RankGuard("p", (1,), "1-p"),)
L1_GUARDS = (RankGuard("q", (1,), "1-n+p"),)
TWO_P = RankGuard("p", (2,), "2-p")
TWO_Q = RankGuard("q", (2,), "2-n+p")
T4_GUARDS = (*L0_GUARDS, TWO_P, *L1_GUARDS, TWO_Q)
COTTON0_GUARDS = (*L0_GUARDS, TWO_P)
COTTON1_GUARDS = (*L1_GUARDS, TWO_Q)


def require_rank(tensor: str, guards: Sequence[RankGuard], n: int, p: int) -> None:
    for guard in guards:
        if guard.blocks(n, p):
            raise RankExcluded(tensor, guard.denominator, n, p)


@dataclass(frozen=True, eq=False)
class _Side:
    """One projector of the pair with its rank, used to share leaf/complement formulas."""

    dd: Jet
    ud: Jet
    uu: Jet
    rank: int


class BarCurvatureEval:
    """Lazily evaluated curvature quantities of gamma_bar at one point."""

    def __init__(
        self,
        m: MetricEval,
        proj: ProjectorEval,
        basis: BiconfBasis,
        conn: BarConnectionEval,
    ):
        self.metric = m
        self.projector = proj
        self.basis = basis
        self.connection = conn
        self._leaf = _Side(proj.P_dd, proj.P_ud, proj.P_uu, proj.p)
        self._complement = _Side(proj.Pi_dd, proj.Pi_ud, proj.Pi_uu, proj.q)

    @property
    def n(self) -> int:
        return self.projector.n

    @property
    def p(self) -> int:
        return self.projector.p

    # curvature

    @cached_property
    def riemann_bar(self) -> Jet:
        """R̄^a_bcd from gamma_bar and its gradient (order-1 jet)."""
        return riemann_jet(self.connection.gamma_bar_jet)

    def _trace_curvature(self, side: _Side) -> Jet:
        """F_ab = P^r_q R̄^q_rab (or the Pi version)."""
        return einsum("rq,qrab->ab", side.ud, self.riemann_bar)

    def _contracted(self, side: _Side) -> Jet:
        """K_cb = P^d_r R̄^r_cdb."""
        return einsum("dr,rcdb->cb", side.ud, self.riemann_bar)

    def _scalar(self, side: _Side) -> Jet:
        return einsum("cb,cb->", self._contracted(side), side.uu)

    @cached_property
    def scalar0(self) -> Jet:
        return self._scalar(self._leaf)

    @cached_property
    def scalar1(self) -> Jet:
        return self._scalar(self._complement)

    @cached_property
    def F0(self) -> Jet:
        return self._trace_curvature(self._leaf)

    @cached_property
    def F1(self) -> Jet:
        return self._trace_curvature(self._complement)

    def _l_tensor(self, side: _Side, F: Jet, scalar: Jet) -> Jet:
        K = self._contracted(side)
        rank = side.rank
        bracket = (
            einsum("dc,db->bc", side.ud, F)
            + einsum("db,dc->bc", side.ud, F)
            - F
        )
        return 2.0 * (einsum("cb->bc", K) - bracket * (1.0 / rank)) + side.dd * scalar * (
            1.0 / (1 - rank)
        )

    @cached_property
    def L0(self) -> Jet:
        """L⁰_bc, not symmetric in general."""
        require_rank("L0", L0_GUARDS, self.n, self.p)
        return self._l_tensor(self._leaf, self.F0, self.scalar0)

    @cached_property
    def L1(self) -> Jet:
        require_rank("L1", L1_GUARDS, self.n, self.p)
        return self._l_tensor(self._complement, self.F1, self.scalar1)

    def _t4_part(self, side: _Side, L: Jet) -> Jet:
        """P^d_c L_[ab] + P^d_[b L_a]c + P_c[a L_b]q P^qd."""
        L_up = einsum("bq,qd->bd", L, side.uu)
        return 0.5 * (
            einsum("dc,ab->dcab", side.ud, L - einsum("ba->ab", L))
            + einsum("db,ac->dcab", side.ud, L)
            - einsum("da,bc->dcab", side.ud, L)
            + einsum("ca,bd->dcab", side.dd, L_up)
            - einsum("cb,ad->dcab", side.dd, L_up)
        )

    @cached_property
    def T4(self) -> Jet:
        """T^d_cab, stored in index order (d, c, a, b)."""
        require_rank("T4", T4_GUARDS, self.n, self.p)
        p, q = self.p, self.n - self.p
        return (
            2.0 * self.riemann_bar
            - self._t4_part(self._leaf, self.L0) * (2.0 / (2 - p))
            - self._t4_part(self._complement, self.L1) * (2.0 / (2 - q))
        )

    @staticmethod
    def _project(side: _Side, T4: Jet) -> Jet:
        return einsum("rstq,dr,sc,ta,qb->dcab", T4, side.ud, side.ud, side.ud, side.ud)

    @cached_property
    def Cpar(self) -> Jet:
        """∥C: T4 with every index projected onto the leaf."""
        require_rank("Cpar", T4_GUARDS, self.n, self.p)
        return self._project(self._leaf, self.T4)

    @cached_property
    def Cperp(self) -> Jet:
        require_rank("Cperp", T4_GUARDS, self.n, self.p)
        return self._project(self._complement, self.T4)

    # first-derivative families

    @cached_property
    def nabla_bar_P(self) -> Jet:
        """[a, b, c] = ∇̄_a P_bc."""
        return bar_covd(self.projector.P_dd, "dd", self.connection)

    @cached_property
    def nabla_bar_Pi(self) -> Jet:
        return bar_covd(self.projector.Pi_dd, "dd", self.connection)

    @cached_property
    def nabla_bar_P_up(self) -> Jet:
        """[a, b, c] = ∇̄_a P^bc."""
        return bar_covd(self.projector.P_uu, "uu", self.connection)

    @cached_property
    def nabla_bar_Pi_up(self) -> Jet:
        return bar_covd(self.projector.Pi_uu, "uu", self.connection)

    @cached_property
    def nabla_bar_P_mixed(self) -> Jet:
        """[a, b, c] = ∇̄_a P^b_c."""
        return bar_covd(self.projector.P_ud, "ud", self.connection)

    @cached_property
    def nabla_bar_Pi_mixed(self) -> Jet:
        return bar_covd(self.projector.Pi_ud, "ud", self.connection)

    @cached_property
    def Lambda(self) -> Jet:
        """Λ^d_bc = 2 P^dr ∇̄_r P_bc."""
        return 2.0 * einsum("dr,rbc->dbc", self.projector.P_uu, self.nabla_bar_P)

    @cached_property
    def Lambda_bar(self) -> Jet:
        return 2.0 * einsum("dr,rbc->dbc", self.projector.Pi_uu, self.nabla_bar_Pi)

    @cached_property
    def Upsilon(self) -> Jet:
        """ϒ_b^sc = 2 P^sr P^cq ∇̄_r P_qb + (2-p) ∇̄_b P^sc."""
        proj = self.projector
        return 2.0 * einsum(
            "sr,cq,rqb->bsc", proj.P_uu, proj.P_uu, self.nabla_bar_P
        ) + self.nabla_bar_P_up * float(2 - proj.p)

    @cached_property
    def Upsilon_bar(self) -> Jet:
        proj = self.projector
        return 2.0 * einsum(
            "sr,cq,rqb->bsc", proj.Pi_uu, proj.Pi_uu, self.nabla_bar_Pi
        ) + self.nabla_bar_Pi_up * float(2 - proj.q)


def bar_curvature(
    m: MetricEval, proj: ProjectorEval, basis: BiconfBasis, conn: BarConnectionEval
) -> BarCurvatureEval:
    return BarCurvatureEval(m, proj, basis, conn)
