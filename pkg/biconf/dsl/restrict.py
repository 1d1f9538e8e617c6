"""Restriction of a block-split spec to one of its leaves."""

from collections.abc import Sequence

from biconf.core.errors import NotBlockSplit
from biconf.dsl.ast import (
    BinOp,
    BlockSplit,
    Call,
    Coord,
    ExprNode,
    ManifoldSpec,
    Neg,
    Number,
    Pow,
)


def _substitute(node: ExprNode, index_map: dict[int, int], frozen: dict[int, float]) -> ExprNode:
    if isinstance(node, Coord):
        if node.index in frozen:
            return Number(frozen[node.index])
        return Coord(node.name, index_map[node.index])
    if isinstance(node, Neg):
        return Neg(_substitute(node.operand, index_map, frozen))
    if isinstance(node, BinOp):
        return BinOp(
            node.op,
            _substitute(node.left, index_map, frozen),
            _substitute(node.right, index_map, frozen),
        )
    if isinstance(node, Pow):
        return Pow(_substitute(node.base, index_map, frozen), node.exponent)
    if isinstance(node, Call):
        return Call(node.func, _substitute(node.arg, index_map, frozen))
    return node


def block_coordinates(spec: ManifoldSpec, side: str = "P") -> list[int]:
    """Coordinate indexes spanning the P leaf (``side="P"``) or the Pi leaf."""
    if not isinstance(spec.projector, BlockSplit):
        raise NotBlockSplit(f"'{spec.name}' does not use a block projector")
    leaf = [spec.coord_index(c) for c in spec.projector.leaf]
    if side == "P":
        return leaf
    return [a for a in range(spec.dim) if a not in leaf]


def restrict_to_leaf(spec: ManifoldSpec, point: Sequence[float], side: str = "P") -> ManifoldSpec:
    """Metric-only spec of the leaf through ``point``.

    Coordinates transverse to the leaf are frozen at their values in
    ``point``; the result has no projector.
    """
    kept = block_coordinates(spec, side)
    index_map = {old: new for new, old in enumerate(kept)}
    frozen = {a: float(point[a]) for a in range(spec.dim) if a not in index_map}
    sub = {name: _substitute(body, index_map, frozen) for name, body in spec.subexprs.items()}
    metric = tuple(
        tuple(_substitute(spec.metric[a][b], index_map, frozen) for b in kept) for a in kept
    )
    return ManifoldSpec(
        name=f"{spec.name}_{side}_leaf",
        dim=len(kept),
        coords=tuple(spec.coords[a] for a in kept),
        constants=dict(spec.constants),
        subexprs=sub,
        metric=metric,
        projector=None,
        domain=tuple(spec.domain[a] for a in kept),
    )
