"""Orthogonal projector pair (P, Pi) in every index placement."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biconf.core.config import settings
from biconf.core.errors import (
    BlockSplitCrossTerms,
    DegenerateNormals,
    NonIntegerRank,
    SingularMetric,
)
from biconf.dsl.ast import BlockSplit, Explicit, ManifoldSpec, Normals
from biconf.dsl.compiler import JetContext
from biconf.geometry.metric import MetricEval
from biconf.jets import Jet, einsum, inv


@dataclass(frozen=True, eq=False)
class ProjectorEval:
    """P and its complement Pi = g - P as order-3 jets.

    Suffixes name index placement: ``dd`` both down, ``ud`` mixed P^a_b,
    ``uu`` both up. ``S_dd = P - Pi`` squares to the metric.
    """

    P_dd: Jet
    P_ud: Jet
    P_uu: Jet
    Pi_dd: Jet
    Pi_ud: Jet
    Pi_uu: Jet
    p: int

    @property
    def n(self) -> int:
        return self.P_dd.shape[0]

    @property
    def q(self) -> int:
        return self.n - self.p

    @cached_property
    def S_dd(self) -> Jet:
        return self.P_dd - self.Pi_dd

    @cached_property
    def S_ud(self) -> Jet:
        return self.P_ud - self.Pi_ud

    @cached_property
    def dP(self) -> np.ndarray:
        """``dP[a, b, c] = d_c P_ab``."""
        return self.P_dd.derivatives(1)

    @cached_property
    def d2P(self) -> np.ndarray:
        return self.P_dd.derivatives(2)


def leaf_projector_jet(spec: ManifoldSpec, m: MetricEval, context: JetContext) -> Jet:
    """P_ab (both down) for the spec's projector form."""
    projector = spec.projector
    g = m.g_jet
    n = spec.dim
    if isinstance(projector, BlockSplit):
        leaf = [spec.coord_index(c) for c in projector.leaf]
        rest = [a for a in range(n) if a not in leaf]
        mask = np.zeros((n, n))
        mask[np.ix_(leaf, leaf)] = 1.0
        rest_mask = np.zeros((n, n))
        rest_mask[np.ix_(rest, rest)] = 1.0
        cross = np.abs(g.coeffs * (1.0 - mask - rest_mask)[..., None])
        scale = max(1.0, float(np.max(np.abs(g.coeffs))))
        if np.max(cross) > settings.tolerances.cross_terms * scale:
            raise BlockSplitCrossTerms(
                "metric couples leaf and complement coordinates; "
                "describe the projector with 'normals' instead"
            )
        return g * mask
    if isinstance(projector, Normals):
        normals = Jet.stack([context.vector(row) for row in projector.covectors])
        gram = einsum("ka,ab,lb->kl", normals, m.ginv_jet, normals)
        try:
            gram_inv = inv(gram)
        except SingularMetric as exc:
            raise DegenerateNormals(f"normal covectors are degenerate: {exc}") from exc
        pi_dd = einsum("ka,kl,lb->ab", normals, gram_inv, normals)
        return g - pi_dd
    if isinstance(projector, Explicit):
        return context.symmetric(projector.components)
    raise ValueError(f"spec '{spec.name}' has no projector")


def projector_from_jet(P_dd: Jet, m: MetricEval, rank_tol: float | None = None) -> ProjectorEval:
    """Fill every placement of P and Pi from P_ab and record the rank."""
    tol = settings.tolerances.validation if rank_tol is None else rank_tol
    g, ginv = m.g_jet, m.ginv_jet
    P_ud = einsum("ac,cb->ab", ginv, P_dd)
    P_uu = einsum("ac,cb->ab", P_ud, ginv)
    trace = float(np.trace(P_ud.value))
    p = int(round(trace))
    if abs(trace - p) > tol:
        raise NonIntegerRank(f"trace of P^a_b is {trace:.12g}, not an integer")
    n = m.n
    identity = np.eye(n)
    return ProjectorEval(
        P_dd=P_dd,
        P_ud=P_ud,
        P_uu=P_uu,
        Pi_dd=g - P_dd,
        Pi_ud=(-P_ud) + identity,
        Pi_uu=ginv - P_uu,
        p=p,
    )


def projector_eval(spec: ManifoldSpec, m: MetricEval) -> ProjectorEval:
    """Assemble the projector pair of a spec at the metric's base point."""
    context = JetContext(spec, m.point)
    return projector_from_jet(leaf_projector_jet(spec, m, context), m)
