"""Numerical validation of a parsed spec at a probe point."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from biconf.core.config import settings
from biconf.core.errors import NotAProjector, OutOfRange
from biconf.core.logging import get_logger
from biconf.dsl.ast import Explicit, ManifoldSpec
from biconf.dsl.compiler import interior_point
from biconf.geometry.metric import eval_metric
from biconf.geometry.projector import projector_eval

logger = get_logger(__name__)

INFINITE_ALGEBRA_WARNING = "rank-{rank} {side}: Lie algebra may be infinite dimensional"
RANK3_NOTE = "rank-3 {side}: conformal flatness is decided by the Cotton condition"


@dataclass(frozen=True, eq=False)
class ValidatedManifold:
    """A spec whose metric and projector passed the probe-point checks."""

    spec: ManifoldSpec
    p: int
    probe: tuple[float, ...]
    warnings: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.spec.dim

    @property
    def q(self) -> int:
        return self.spec.dim - self.p

    @property
    def name(self) -> str:
        return self.spec.name


def check_interior(spec: ManifoldSpec, point: Sequence[float]) -> None:
    for name, x, (lo, hi) in zip(spec.coords, point, spec.domain, strict=True):
        if not lo < x < hi:
            raise OutOfRange(f"{name}={x} is not strictly inside [{lo}, {hi}]")


def validate_spec(
    spec: ManifoldSpec, probe: Sequence[float] | None = None, tol: float | None = None
) -> ValidatedManifold:
    """Check nondegeneracy, projector axioms and integer rank at ``probe``."""
    tol = settings.tolerances.validation if tol is None else tol
    point = tuple(float(x) for x in (interior_point(spec) if probe is None else probe))
    if len(point) != spec.dim:
        raise OutOfRange(f"probe has {len(point)} coordinates, spec has {spec.dim}")
    check_interior(spec, point)
    if spec.projector is None:
        raise NotAProjector("present", float("inf"))

    m = eval_metric(spec, point)
    proj = projector_eval(spec, m)

    if isinstance(spec.projector, Explicit):
        P = proj.P_dd.value
        Pi = proj.Pi_dd.value
        idempotent = np.einsum("ap,pb->ab", proj.P_ud.value, P) - P
        orthogonal = np.einsum("ac,cd,db->ab", P, m.ginv, Pi)
        complement = P + Pi - m.g
        for axiom, residual in (
            ("symmetric", P - P.T),
            ("idempotent", idempotent),
            ("orthogonal", orthogonal),
            ("complementary", complement),
        ):
            worst = float(np.max(np.abs(residual)))
            if worst > tol:
                raise NotAProjector(axiom, worst)

    n, p = spec.dim, proj.p
    if p == 0:
        raise NotAProjector("leaf-rank", 0.0)
    if p == n:
        raise NotAProjector("complement-rank", 0.0)

    warnings: list[str] = []
    notes: list[str] = []
    for side, rank in (("leaf", p), ("complement", n - p)):
        if rank in (1, 2):
            warnings.append(INFINITE_ALGEBRA_WARNING.format(rank=rank, side=side))
        if rank == 3:
            notes.append(RANK3_NOTE.format(side=side))
    for message in warnings:
        logger.warning(f"{spec.name}: {message}")
    for message in notes:
        logger.info(f"{spec.name}: {message}")

    return ValidatedManifold(
        spec=spec, p=p, probe=point, warnings=tuple(warnings), notes=tuple(notes)
    )
