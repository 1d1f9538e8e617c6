"""Static identity battery: relations every (metric, projector) pair must satisfy.

Each check evaluates both sides by independent code paths and reports the
residual scaled by the point scale or the magnitude of the sides, whichever
is larger.
"""

from biconf.biconformal.curvature import COTTON0_GUARDS, COTTON1_GUARDS
from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.types import IdentityResidual, RankGuard
from biconf.geometry.connection import covd
from biconf.jets import Jet, einsum, max_abs


def compare(
    id: str,
    point: PointEvaluation,
    lhs: Jet,
    rhs: Jet | None = None,
    informational: bool = False,
) -> IdentityResidual:
    """Scaled max-abs of ``lhs - rhs`` (``rhs`` omitted means zero)."""
    difference = lhs if rhs is None else lhs - rhs
    sides = max(max_abs(lhs), 0.0 if rhs is None else max_abs(rhs))
    return IdentityResidual(
        id=id,
        residual=max_abs(difference),
        scale=max(point.scale, 1.0 + sides),
        informational=informational,
    )


def _blocked(guards: tuple[RankGuard, ...], point: PointEvaluation) -> bool:
    return any(guard.blocks(point.n, point.p) for guard in guards)


def metric_identities(point: PointEvaluation) -> list[IdentityResidual]:
    """Metric compatibility and the second Bianchi identity of the Levi-Civita connection."""
    gamma = point.connection.gamma_jet
    riemann = point.curvature.riemann_jet
    nabla_R = covd(riemann, "uddd", gamma)  # [e, a, b, c, d] = ∇_e R^a_bcd
    cyclic = (
        einsum("eabcd->abcde", nabla_R)
        + einsum("cabde->abcde", nabla_R)
        + einsum("dabec->abcde", nabla_R)
    )
    return [
        compare("metric-compatibility", point, covd(point.metric.g_jet, "dd", gamma)),
        compare("bianchi-second", point, cyclic),
    ]


def _riemann_difference(point: PointEvaluation) -> list[IdentityResidual]:
    L = point.bar.L
    LL = einsum("arc,rdb->abcd", L, L) - einsum("ard,rcb->abcd", L, L)
    riemann = point.curvature.riemann_jet
    riemann_bar = point.bar_curvature.riemann_bar
    results = []
    # the bar form differs from the metric form only in the sign of the LL term
    for id, gamma, sign in (
        ("riemann-difference-metric", point.connection.gamma_jet, 1.0),
        ("riemann-difference-bar", point.bar.gamma_bar_jet, -1.0),
    ):
        nabla_L = covd(L, "udd", gamma)  # [e, a, b, c] = ∇_e L^a_bc
        twisted = einsum("cadb->abcd", nabla_L) - einsum("dacb->abcd", nabla_L)
        results.append(compare(id, point, riemann_bar, riemann + twisted + sign * LL))
    bianchi = (
        riemann_bar + einsum("acdb->abcd", riemann_bar) + einsum("adbc->abcd", riemann_bar)
    )
    results.append(compare("bar-bianchi-first", point, bianchi))
    return results


def _basis_identities(point: PointEvaluation) -> list[IdentityResidual]:
    proj, basis = point.projector, point.basis
    return [
        compare("M-symmetric", point, basis.M, einsum("acb->abc", basis.M)),
        compare("E-transverse", point, einsum("ca,c->a", proj.Pi_ud, basis.E), basis.E),
        compare("W-transverse", point, einsum("ca,c->a", proj.P_ud, basis.W), basis.W),
        compare("E-leaf-null", point, einsum("ab,b->a", proj.P_uu, basis.E)),
        compare("W-complement-null", point, einsum("ab,b->a", proj.Pi_uu, basis.W)),
        compare("A-plus-B", point, basis.A + basis.B, basis.T),
    ]


def _covd_identities(point: PointEvaluation) -> list[IdentityResidual]:
    proj, basis, curv = point.projector, point.basis, point.bar_curvature
    gamma = point.connection.gamma_jet
    ginv = point.metric.ginv_jet
    p, q = proj.p, proj.q
    E, W, M = basis.E, basis.W, basis.M
    S_uu = proj.P_uu - proj.Pi_uu
    E_up = einsum("ab,b->a", ginv, E)
    W_up = einsum("ab,b->a", ginv, W)

    results = []
    # dual pairs: swapping P and Pi flips the signs of M and S
    sides = (
        ("P", proj.P_dd, proj.P_ud, proj.P_uu, p, E, E_up, 1.0),
        ("Pi", proj.Pi_dd, proj.Pi_ud, proj.Pi_uu, q, W, W_up, -1.0),
    )
    others = {"P": sides[1], "Pi": sides[0]}
    bar = {
        "P": (curv.nabla_bar_P, curv.nabla_bar_P_mixed, curv.nabla_bar_P_up),
        "Pi": (curv.nabla_bar_Pi, curv.nabla_bar_Pi_mixed, curv.nabla_bar_Pi_up),
    }
    for name, dd, ud, uu, rank, form, form_up, sign in sides:
        _, _, o_ud, _, o_rank, o_form, o_form_up, _ = others[name]
        sM, sS = sign * M, sign * S_uu
        nabla_dd = covd(dd, "dd", gamma)
        nabla_ud = covd(ud, "ud", gamma)
        nabla_uu = covd(uu, "uu", gamma)
        bar_dd, bar_ud, bar_uu = bar[name]

        lower = (
            nabla_dd
            - einsum("a,bc->abc", form, dd) * (1.0 / rank)
            - (einsum("b,ac->abc", form, dd) + einsum("c,ab->abc", form, dd)) * (0.5 / rank)
            - 0.5 * (einsum("pc,pab->abc", ud, sM) + einsum("pb,pac->abc", ud, sM))
        )
        results.append(compare(f"lower-covd-{name}", point, bar_dd, lower))

        mixed = 0.5 * (
            2.0 * nabla_ud
            + einsum("bq,rc,qra->abc", sS, ud, sM)
            - einsum("be,eac->abc", uu, sM)
            + einsum("c,ba->abc", o_form, o_ud) * (1.0 / o_rank)
            - einsum("c,ba->abc", form, ud) * (1.0 / rank)
        )
        results.append(compare(f"mixed-covd-{name}", point, bar_ud, mixed))

        upper = (
            nabla_uu
            + einsum("a,bc->abc", form, uu) * (1.0 / rank)
            + (einsum("c,ba->abc", o_form_up, o_ud) + einsum("b,ca->abc", o_form_up, o_ud))
            * (0.5 / o_rank)
            + 0.5
            * (
                einsum("be,ear,rc->abc", sS, sM, uu)
                + einsum("ce,ear,rb->abc", sS, sM, uu)
            )
        )
        results.append(compare(f"upper-covd-{name}", point, bar_uu, upper))

        results.append(compare(f"divergence-upper-{name}", point, einsum("aab->b", bar_uu)))
        results.append(compare(f"divergence-mixed-{name}", point, einsum("aab->b", bar_ud)))
        results.append(compare(f"trace-lower-{name}", point, einsum("bc,abc->a", uu, bar_dd), -form))
        results.append(compare(f"trace-upper-{name}", point, einsum("bc,abc->a", dd, bar_uu), form))
        results.append(compare(f"transverse-lower-{name}", point, einsum("dr,drb->b", uu, bar_dd)))
        other_mixed = bar["Pi" if name == "P" else "P"][1]
        results.append(
            compare(f"transverse-mixed-{name}", point, einsum("dr,brd->b", ud, other_mixed))
        )
    return results


def _l_identities(point: PointEvaluation) -> list[IdentityResidual]:
    curv = point.bar_curvature
    results = []
    if not _blocked(COTTON0_GUARDS, point):
        p = point.p
        L0 = curv.L0
        results.append(
            compare(
                "antisymmetric-L0",
                point,
                L0 - einsum("ba->ab", L0),
                curv.F0 * (2.0 * (2 - p) / p),
            )
        )
    if not _blocked(COTTON1_GUARDS, point):
        q = point.q
        L1 = curv.L1
        results.append(
            compare(
                "antisymmetric-L1",
                point,
                L1 - einsum("ba->ab", L1),
                curv.F1 * (2.0 * (2 - q) / q),
            )
        )
    return results


def _separable_identities(point: PointEvaluation) -> list[IdentityResidual]:
    """Consequences of T_abc = 0 for the bar derivatives of the projectors."""
    proj, basis, curv = point.projector, point.basis, point.bar_curvature
    p, q = proj.p, proj.q
    E, W = basis.E, basis.W
    return [
        compare(
            "separable-covd-P",
            point,
            curv.nabla_bar_P,
            einsum("a,bc->abc", E, proj.P_dd) * (-1.0 / p),
        ),
        compare(
            "separable-covd-Pi",
            point,
            curv.nabla_bar_Pi,
            einsum("a,bc->abc", W, proj.Pi_dd) * (-1.0 / q),
        ),
        compare("parallel-mixed-P", point, curv.nabla_bar_P_mixed),
        compare("parallel-mixed-Pi", point, curv.nabla_bar_Pi_mixed),
        compare(
            "separable-upper-P",
            point,
            curv.nabla_bar_P_up,
            einsum("c,ab->cab", E, proj.P_uu) * (1.0 / p),
        ),
        compare(
            "separable-upper-Pi",
            point,
            curv.nabla_bar_Pi_up,
            einsum("c,ab->cab", W, proj.Pi_uu) * (1.0 / q),
        ),
    ]


def _conjectures(point: PointEvaluation) -> list[IdentityResidual]:
    """Bracketed tensors believed, but not proven, to vanish identically."""
    curv = point.bar_curvature
    results = []
    for id, guards, rank, L, form in (
        ("conjecture-curl-L0", COTTON0_GUARDS, point.p, lambda: curv.L0, point.basis.E),
        ("conjecture-curl-L1", COTTON1_GUARDS, point.q, lambda: curv.L1, point.basis.W),
    ):
        if _blocked(guards, point):
            continue
        L_value = L()
        curl = form.grad()  # [b, a] = ∂_a form_b
        bracket = (L_value - einsum("ba->ab", L_value)) * (0.5 / (2 - rank)) - (
            einsum("ba->ab", curl) - curl
        ) * (0.5 / rank)
        results.append(compare(id, point, bracket, informational=True))
    return results


def is_separable(point: PointEvaluation, threshold: float | None = None) -> bool:
    """T_abc vanishes at this point under the scaled threshold."""
    threshold = settings.run.threshold if threshold is None else threshold
    return max_abs(point.basis.T) / point.scale < threshold


def static_identities(
    point: PointEvaluation, threshold: float | None = None
) -> list[IdentityResidual]:
    """Run the full battery at one point.

    The T_abc = 0 consequences are added only where T_abc vanishes, and the
    L⁰/L¹ checks only for ranks where those tensors are defined.
    """
    results = metric_identities(point)
    results += _riemann_difference(point)
    results += _basis_identities(point)
    results += _covd_identities(point)
    results += _l_identities(point)
    if is_separable(point, threshold):
        results += _separable_identities(point)
    results += _conjectures(point)
    return results
