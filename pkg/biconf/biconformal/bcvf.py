"""Bi-conformal vector field residuals, gauges and the Lie-derivative identity suite."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from biconf.biconformal.curvature import T4_GUARDS
from biconf.biconformal.identities import compare
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.errors import NotABCVF, UnknownVector
from biconf.core.logging import get_logger
from biconf.core.types import IdentityResidual
from biconf.dsl.ast import ManifoldSpec
from biconf.dsl.compiler import JetContext
from biconf.geometry.connection import covd
from biconf.geometry.lie import lie_derivative, lie_derivative_connection
from biconf.jets import Jet, einsum, max_abs

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class GaugeJets:
    """A candidate field at one point with its extracted gauges carried as jets."""

    name: str
    point: PointEvaluation
    xi: Jet
    phi: Jet
    chi: Jet
    lie_P: Jet
    lie_Pi: Jet

    @cached_property
    def phi_up(self) -> Jet:
        """φ^a = g^ab ∂_b φ."""
        return einsum("ab,b->a", self.point.metric.ginv_jet, self.phi.grad())

    @cached_property
    def chi_up(self) -> Jet:
        return einsum("ab,b->a", self.point.metric.ginv_jet, self.chi.grad())

    @cached_property
    def phi_bar(self) -> Jet:
        return einsum("ab,b->a", self.point.projector.P_dd, self.phi_up)

    @cached_property
    def phi_star(self) -> Jet:
        return einsum("ab,b->a", self.point.projector.Pi_dd, self.phi_up)

    @cached_property
    def chi_bar(self) -> Jet:
        return einsum("ab,b->a", self.point.projector.Pi_dd, self.chi_up)

    @cached_property
    def chi_star(self) -> Jet:
        return einsum("ab,b->a", self.point.projector.P_dd, self.chi_up)


@dataclass(frozen=True, eq=False)
class BCVFWitness:
    """Outcome of the bi-conformal condition for one field at one point."""

    name: str
    point: tuple[float, ...]
    xi: np.ndarray
    dxi: np.ndarray
    d2xi: np.ndarray
    phi: float
    chi: float
    phi_bar: np.ndarray
    phi_star: np.ndarray
    chi_bar: np.ndarray
    chi_star: np.ndarray
    residual_P: float
    residual_Pi: float
    declared_phi_deviation: float | None = None
    declared_chi_deviation: float | None = None
    scale: float = 1.0
    tolerance: float = field(default_factory=lambda: settings.tolerances.bcvf)

    @property
    def residual(self) -> float:
        return max(self.residual_P, self.residual_Pi)

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    @property
    def alpha(self) -> float:
        return 0.5 * (self.phi + self.chi)

    @property
    def beta(self) -> float:
        return 0.5 * (self.phi - self.chi)


def _vector_jet(spec: ManifoldSpec, name: str, context: JetContext) -> Jet:
    if name not in spec.vectors:
        known = ", ".join(sorted(spec.vectors)) or "none"
        raise UnknownVector(f"'{spec.name}' declares no vector '{name}' (known: {known})")
    return context.vector(spec.vectors[name].components)


def gauge_jets(spec: ManifoldSpec, name: str, point: Sequence[float]) -> GaugeJets:
    """Lie derivatives of P and Pi along the field and the gauges extracted from them.

    φ = P^ab (L_ξ P)_ab / p and χ = Π^ab (L_ξ Π)_ab / (n-p), kept as jets so
    their gradients are available for the identity suite.
    """
    evaluation = PointEvaluation.at(spec, point)
    xi = _vector_jet(spec, name, JetContext(spec, point))
    proj = evaluation.projector
    lie_P = lie_derivative(proj.P_dd, "dd", xi)
    lie_Pi = lie_derivative(proj.Pi_dd, "dd", xi)
    phi = einsum("ab,ab->", proj.P_uu, lie_P) * (1.0 / proj.p)
    chi = einsum("ab,ab->", proj.Pi_uu, lie_Pi) * (1.0 / proj.q)
    return GaugeJets(name, evaluation, xi, phi, chi, lie_P, lie_Pi)


def bcvf_check(
    spec: ManifoldSpec, name: str, point: Sequence[float], tolerance: float | None = None
) -> BCVFWitness:
    """Evaluate L_ξ P - φP and L_ξ Π - χΠ at ``point``.

    ``tolerance`` bounds the scaled residual for ``passed`` and defaults to the
    configured field tolerance.
    """
    return _witness(spec, gauge_jets(spec, name, point), tolerance)


def _witness(
    spec: ManifoldSpec, gauges: GaugeJets, tolerance: float | None = None
) -> BCVFWitness:
    name = gauges.name
    point = gauges.point.point
    proj = gauges.point.projector
    xi = gauges.xi
    scale = 1.0 + max(max_abs(gauges.point.metric.g), max_abs(xi.grad()))
    residual_P = max_abs(gauges.lie_P - gauges.phi * proj.P_dd) / scale
    residual_Pi = max_abs(gauges.lie_Pi - gauges.chi * proj.Pi_dd) / scale

    context = JetContext(spec, point)
    declared = spec.vectors[name]
    phi_dev = chi_dev = None
    if declared.phi is not None:
        phi_dev = abs(float(context.eval(declared.phi).value) - float(gauges.phi.value))
    if declared.chi is not None:
        chi_dev = abs(float(context.eval(declared.chi).value) - float(gauges.chi.value))
    return BCVFWitness(
        name=name,
        point=tuple(float(x) for x in point),
        xi=xi.value,
        dxi=xi.derivatives(1),
        d2xi=xi.derivatives(2),
        phi=float(gauges.phi.value),
        chi=float(gauges.chi.value),
        phi_bar=gauges.phi_bar.value,
        phi_star=gauges.phi_star.value,
        chi_bar=gauges.chi_bar.value,
        chi_star=gauges.chi_star.value,
        residual_P=residual_P,
        residual_Pi=residual_Pi,
        declared_phi_deviation=phi_dev,
        declared_chi_deviation=chi_dev,
        scale=scale,
        tolerance=settings.tolerances.bcvf if tolerance is None else tolerance,
    )


def _gauge_identities(g: GaugeJets) -> list[IdentityResidual]:
    ev, xi = g.point, g.xi
    proj, m = ev.projector, ev.metric
    alpha = 0.5 * (g.phi + g.chi)
    beta = 0.5 * (g.phi - g.chi)
    return [
        compare("lie-S", ev, lie_derivative(proj.S_dd, "dd", xi), alpha * proj.S_dd + beta * m.g_jet),
        compare("lie-g", ev, lie_derivative(m.g_jet, "dd", xi), alpha * m.g_jet + beta * proj.S_dd),
        compare("lie-P-mixed", ev, lie_derivative(proj.P_ud, "ud", xi)),
        compare("lie-Pi-mixed", ev, lie_derivative(proj.Pi_ud, "ud", xi)),
        compare("lie-P-upper", ev, lie_derivative(proj.P_uu, "uu", xi), -g.phi * proj.P_uu),
        compare("lie-Pi-upper", ev, lie_derivative(proj.Pi_uu, "uu", xi), -g.chi * proj.Pi_uu),
    ]


def _basis_identities(g: GaugeJets) -> list[IdentityResidual]:
    ev, xi = g.point, g.xi
    proj, basis = ev.projector, ev.basis
    M = basis.M
    lie_M = (
        g.phi * M
        + (g.chi - g.phi) * einsum("pa,pbc->abc", proj.P_ud, M)
        - einsum("bc,a->abc", proj.P_dd, g.phi_star)
        + einsum("cb,a->abc", proj.Pi_dd, g.chi_star)
    )
    A_up, B_up = basis.A_up, basis.B_up
    return [
        compare("lie-M", ev, lie_derivative(M, "ddd", xi), lie_M),
        compare("lie-E", ev, lie_derivative(basis.E, "d", xi), -float(proj.p) * g.phi_star),
        compare(
            "lie-W", ev, lie_derivative(basis.W, "d", xi), float(proj.p - proj.n) * g.chi_star
        ),
        compare(
            "lie-T", ev, lie_derivative(basis.T, "ddd", xi), g.phi * basis.B + g.chi * basis.A
        ),
        compare("lie-A", ev, lie_derivative(A_up, "udd", xi), (g.chi - g.phi) * A_up),
        compare("lie-B", ev, lie_derivative(B_up, "udd", xi), (g.phi - g.chi) * B_up),
        compare(
            "lie-A-plus-B",
            ev,
            lie_derivative(A_up + B_up, "udd", xi),
            (g.chi - g.phi) * (A_up - B_up),
        ),
    ]


def _connection_identities(g: GaugeJets) -> list[IdentityResidual]:
    ev, xi = g.point, g.xi
    proj, bar, m = ev.projector, ev.bar, ev.metric
    gamma_bar = bar.gamma_bar_jet
    lie_gamma = lie_derivative_connection(gamma_bar, xi)

    ginv = m.ginv_jet
    phi_bar_up = einsum("ab,b->a", ginv, g.phi_bar)
    chi_bar_up = einsum("ab,b->a", ginv, g.chi_bar)
    gauge_terms = 0.5 * (
        einsum("b,ac->abc", g.phi_bar, proj.P_ud)
        + einsum("c,ab->abc", g.phi_bar, proj.P_ud)
        - einsum("a,cb->abc", phi_bar_up, proj.P_dd)
        + einsum("b,ac->abc", g.chi_bar, proj.Pi_ud)
        + einsum("c,ab->abc", g.chi_bar, proj.Pi_ud)
        - einsum("a,cb->abc", chi_bar_up, proj.Pi_dd)
    )
    nabla_xi = covd(xi, "u", gamma_bar)  # [c, a] = ∇̄_c ξ^a
    second = covd(nabla_xi, "du", gamma_bar)  # [b, c, a] = ∇̄_b ∇̄_c ξ^a
    riemann_bar = ev.bar_curvature.riemann_bar
    lie_gamma_intrinsic = einsum("bca->abc", second) + einsum("d,acdb->abc", xi, riemann_bar)
    return [
        compare("lie-connection-gauges", ev, lie_gamma, gauge_terms),
        compare("lie-connection-curvature", ev, lie_gamma, lie_gamma_intrinsic),
    ]


def _invariant_identities(g: GaugeJets) -> list[IdentityResidual]:
    ev, xi = g.point, g.xi
    proj, curv = ev.projector, ev.bar_curvature
    mixed_P = curv.nabla_bar_P_mixed  # [c, a, b] = ∇̄_c P^a_b
    mixed_Pi = curv.nabla_bar_Pi_mixed
    # λ1 Λ + λ2 ∇̄_c P^a_b + λ3 ∇̄_b P^a_c + μ1 Λ̄ + μ2 ∇̄_c Π^a_b + μ3 ∇̄_b Π^a_c
    weights = (1.0, -2.0, 0.5, 3.0, 1.5, -1.0)
    family = (
        weights[0] * curv.Lambda
        + weights[1] * einsum("cab->abc", mixed_P)
        + weights[2] * einsum("bac->abc", mixed_P)
        + weights[3] * curv.Lambda_bar
        + weights[4] * einsum("cab->abc", mixed_Pi)
        + weights[5] * einsum("bac->abc", mixed_Pi)
    )
    results = [
        compare("lie-Lambda", ev, lie_derivative(curv.Lambda, "udd", xi)),
        compare("lie-Lambda-bar", ev, lie_derivative(curv.Lambda_bar, "udd", xi)),
        compare(
            "lie-covd-P-lower",
            ev,
            lie_derivative(curv.nabla_bar_P, "ddd", xi),
            g.phi * curv.nabla_bar_P + einsum("c,ab->cab", g.phi_star, proj.P_dd),
        ),
        compare(
            "lie-covd-Pi-lower",
            ev,
            lie_derivative(curv.nabla_bar_Pi, "ddd", xi),
            g.chi * curv.nabla_bar_Pi + einsum("c,ab->cab", g.chi_star, proj.Pi_dd),
        ),
        compare(
            "lie-covd-P-upper",
            ev,
            lie_derivative(curv.nabla_bar_P_up, "duu", xi),
            -einsum("c,ab->cab", g.phi_star, proj.P_uu) - g.phi * curv.nabla_bar_P_up,
        ),
        compare(
            "lie-covd-Pi-upper",
            ev,
            lie_derivative(curv.nabla_bar_Pi_up, "duu", xi),
            -einsum("c,ab->cab", g.chi_star, proj.Pi_uu) - g.chi * curv.nabla_bar_Pi_up,
        ),
        compare("lie-covd-P-mixed", ev, lie_derivative(mixed_P, "dud", xi)),
        compare("lie-covd-Pi-mixed", ev, lie_derivative(mixed_Pi, "dud", xi)),
        compare("lie-invariant-family", ev, lie_derivative(family, "udd", xi)),
    ]
    if not any(guard.blocks(ev.n, ev.p) for guard in T4_GUARDS):
        results.append(compare("lie-Cpar", ev, lie_derivative(curv.Cpar, "uddd", xi)))
        results.append(compare("lie-Cperp", ev, lie_derivative(curv.Cperp, "uddd", xi)))
    return results


def bcvf_identity_suite(
    spec: ManifoldSpec, name: str, point: Sequence[float], tolerance: float | None = None
) -> list[IdentityResidual]:
    """Check the Lie-derivative identities a genuine BCVF must satisfy.

    Raises NotABCVF when the field fails the defining condition at ``point``,
    since the identities presuppose it.
    """
    gauges = gauge_jets(spec, name, point)
    witness = _witness(spec, gauges, tolerance)
    if not witness.passed:
        raise NotABCVF([name], witness.residual)
    results = (
        _gauge_identities(gauges)
        + _basis_identities(gauges)
        + _connection_identities(gauges)
        + _invariant_identities(gauges)
    )
    worst = max(results, key=lambda r: r.scaled)
    logger.debug(f"{spec.name}/{name}: worst identity {worst.id} at {worst.scaled:.3e}")
    return results
