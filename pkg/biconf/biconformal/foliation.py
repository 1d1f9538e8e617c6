"""Cotton-type obstructions for rank-3 leaves and the 1-form u_a."""

from collections.abc import Sequence
from functools import cached_property

import numpy as np

from biconf.biconformal.basis import BiconfBasis
from biconf.biconformal.connection import BarConnectionEval, bar_covd
from biconf.biconformal.curvature import (
    COTTON0_GUARDS,
    COTTON1_GUARDS,
    BarCurvatureEval,
    require_rank,
)
from biconf.core.errors import LeafNotRank3
from biconf.dsl.ast import ManifoldSpec
from biconf.dsl.restrict import restrict_to_leaf
from biconf.geometry.connection import christoffel, covd
from biconf.geometry.curvature import curvature
from biconf.geometry.metric import eval_metric
from biconf.geometry.projector import ProjectorEval
from biconf.jets import Jet, einsum


def _cotton(L: Jet, conn: BarConnectionEval) -> Jet:
    """∇̄_[a L_b]c with [ab] = (ab - ba)/2."""
    nabla_L = bar_covd(L, "dd", conn)
    return 0.5 * (nabla_L - einsum("bac->abc", nabla_L))


def _projected(ud: Jet, tensor: Jet) -> Jet:
    return einsum("rsq,ra,sb,qc->abc", tensor, ud, ud, ud)


class FoliationObstructions:
    """cotton0/cotton1, their projections and the curl of u_a at one point.

    The cotton tensors differentiate L⁰ (built from R̄, itself built from
    second derivatives of gamma_bar), so they use all three jet orders and
    come out as order-0 jets.
    """

    def __init__(
        self,
        proj: ProjectorEval,
        basis: BiconfBasis,
        conn: BarConnectionEval,
        curv: BarCurvatureEval,
    ):
        self.projector = proj
        self.basis = basis
        self.connection = conn
        self.curvature = curv

    @cached_property
    def cotton0(self) -> Jet:
        require_rank("cotton0", COTTON0_GUARDS, self.projector.n, self.projector.p)
        return _cotton(self.curvature.L0, self.connection)

    @cached_property
    def cotton0_projected(self) -> Jet:
        """P_a^r P_b^s P_c^q ∇̄_[r L⁰_s]q."""
        return _projected(self.projector.P_ud, self.cotton0)

    @cached_property
    def cotton1(self) -> Jet:
        require_rank("cotton1", COTTON1_GUARDS, self.projector.n, self.projector.p)
        return _cotton(self.curvature.L1, self.connection)

    @cached_property
    def cotton1_projected(self) -> Jet:
        return _projected(self.projector.Pi_ud, self.cotton1)

    @cached_property
    def u(self) -> Jet:
        """u_a = E_a/2p + W_a/2(n-p)."""
        proj = self.projector
        return self.basis.E * (1.0 / (2 * proj.p)) + self.basis.W * (1.0 / (2 * proj.q))

    @cached_property
    def du(self) -> Jet:
        """du[a, b] = ∂_[a u_b]."""
        grad = self.u.grad()  # [b, a] = ∂_a u_b
        return 0.5 * (einsum("ba->ab", grad) - grad)


def _leaf_spec(spec: ManifoldSpec, point: Sequence[float], side: str) -> ManifoldSpec:
    leaf = restrict_to_leaf(spec, point, side)
    if leaf.dim != 3:
        raise LeafNotRank3(f"'{spec.name}' has a rank-{leaf.dim} {side} leaf, not rank 3")
    return leaf


def _leaf_point(spec: ManifoldSpec, leaf: ManifoldSpec, point: Sequence[float]) -> list[float]:
    return [float(point[spec.coord_index(name)]) for name in leaf.coords]


def leaf_cotton_oracle(spec: ManifoldSpec, point: Sequence[float], side: str = "P") -> np.ndarray:
    """Cotton-York tensor of the induced 3-metric through ``point``.

    Returns ∇_[a L_b]c with L = 2 Ric - R g / 2, the normalization of L⁰ on
    a rank-3 leaf, so the result is comparable with the leaf block of
    ``cotton0`` (or ``cotton1`` for ``side="Pi"``).
    """
    leaf = _leaf_spec(spec, point, side)
    m = eval_metric(leaf, _leaf_point(spec, leaf, point))
    c = christoffel(m)
    curv = curvature(c, m)
    g = m.g_jet.truncate(curv.ricci_jet.order)
    scalar = einsum("ab,ab->", m.ginv_jet, curv.ricci_jet)
    L = 2.0 * curv.ricci_jet - 0.5 * g * scalar
    nabla_L = covd(L, "dd", c.gamma_jet)
    return 0.5 * (nabla_L.value - np.einsum("bac->abc", nabla_L.value))


def leaf_weyl(spec: ManifoldSpec, point: Sequence[float], side: str = "P") -> np.ndarray:
    """Mixed Weyl tensor C^a_bcd of the induced leaf metric through ``point``."""
    leaf = restrict_to_leaf(spec, point, side)
    m = eval_metric(leaf, _leaf_point(spec, leaf, point))
    return curvature(christoffel(m), m).weyl
