"""Expression trees and the parsed manifold description."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")
BINARY_OPS = ("+", "-", "*", "/")
MAX_EXPONENT_DENOMINATOR = 4


@dataclass(frozen=True)
class Number:
    value: float

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return ()


@dataclass(frozen=True)
class Coord:
    name: str
    index: int

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return ()


@dataclass(frozen=True)
class Const:
    name: str

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return ()


@dataclass(frozen=True)
class Ref:
    """Reference to a named sub-expression (``func`` definition)."""

    name: str

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return ()


@dataclass(frozen=True)
class Neg:
    operand: "ExprNode"

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return (self.operand,)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprNode"
    right: "ExprNode"

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: Fraction

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return (self.base,)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprNode"

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return (self.arg,)


@dataclass(frozen=True)
class Name:
    """Unresolved identifier; only present between parsing and resolution."""

    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    @property
    def children(self) -> tuple["ExprNode", ...]:
        return ()


ExprNode = Union[Number, Coord, Const, Ref, Neg, BinOp, Pow, Call, Name]

ZERO = Number(0.0)


def walk(node: ExprNode):
    """Yield every node of a tree, parents first."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def references(node: ExprNode) -> set[str]:
    return {n.name for n in walk(node) if isinstance(n, Ref)}


# Projector forms


@dataclass(frozen=True)
class BlockSplit:
    """Leaf coordinates span P; the remaining coordinates span its complement."""

    leaf: tuple[str, ...]


@dataclass(frozen=True)
class Normals:
    """Covectors spanning the complement Pi (codimension = number of covectors)."""

    covectors: tuple[tuple[ExprNode, ...], ...]


@dataclass(frozen=True)
class Explicit:
    """Components P_ab with both indexes down."""

    components: tuple[tuple[ExprNode, ...], ...]


ProjectorSpec = Union[BlockSplit, Normals, Explicit]


@dataclass(frozen=True)
class VectorSpec:
    """Candidate vector field with optional declared gauges."""

    components: tuple[ExprNode, ...]
    phi: ExprNode | None = None
    chi: ExprNode | None = None


@dataclass(frozen=True)
class ManifoldSpec:
    """Parsed manifold description.

    ``metric`` is stored as a full symmetric n x n array; unset entries are
    ``Number(0.0)``. ``projector`` may be ``None`` only for derived
    metric-only specs (leaf restrictions).
    """

    name: str
    dim: int
    coords: tuple[str, ...]
    constants: dict[str, float]
    subexprs: dict[str, ExprNode]
    metric: tuple[tuple[ExprNode, ...], ...]
    projector: ProjectorSpec | None
    domain: tuple[tuple[float, float], ...]
    vectors: dict[str, VectorSpec] = field(default_factory=dict)

    def coord_index(self, name: str) -> int:
        return self.coords.index(name)
