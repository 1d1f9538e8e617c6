"""Compile expression trees into evaluators that return order-3 jets."""

from collections.abc import Sequence

import numpy as np

from biconf.core.errors import DimensionMismatch
from biconf.dsl.ast import (
    ZERO,
    BinOp,
    Call,
    Const,
    Coord,
    ExprNode,
    ManifoldSpec,
    Name,
    Neg,
    Number,
    Pow,
    Ref,
)
from biconf.jets import Jet


class JetContext:
    """Evaluates expressions of one spec at one base point.

    Coordinate and sub-expression jets are cached, so every component of a
    tensor evaluated through the same context shares them.
    """

    def __init__(self, spec: ManifoldSpec, point: Sequence[float]):
        if len(point) != spec.dim:
            raise DimensionMismatch(f"point has {len(point)} coordinates, spec has {spec.dim}")
        self.spec = spec
        self.point = tuple(float(x) for x in point)
        self._coords: dict[int, Jet] = {}
        self._subexprs: dict[str, Jet] = {}

    def constant(self, value: float) -> Jet:
        return Jet.constant(value, self.spec.dim)

    def eval(self, node: ExprNode) -> Jet:
        if isinstance(node, Number):
            return self.constant(node.value)
        if isinstance(node, Coord):
            if node.index not in self._coords:
                self._coords[node.index] = Jet.variable(node.index, self.point)
            return self._coords[node.index]
        if isinstance(node, Const):
            return self.constant(self.spec.constants[node.name])
        if isinstance(node, Ref):
            if node.name not in self._subexprs:
                self._subexprs[node.name] = self.eval(self.spec.subexprs[node.name])
            return self._subexprs[node.name]
        if isinstance(node, Neg):
            return -self.eval(node.operand)
        if isinstance(node, BinOp):
            left, right = self.eval(node.left), self.eval(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            return left / right
        if isinstance(node, Pow):
            return self.eval(node.base).power(node.exponent)
        if isinstance(node, Call):
            return getattr(self.eval(node.arg), node.func)()
        if isinstance(node, Name):
            raise TypeError(f"unresolved identifier '{node.name}'")
        raise TypeError(f"unknown expression node {node!r}")

    def vector(self, nodes: Sequence[ExprNode]) -> Jet:
        return Jet.stack([self.eval(node) for node in nodes])

    def symmetric(self, rows: Sequence[Sequence[ExprNode]]) -> Jet:
        """Evaluate a symmetric array, visiting the upper triangle only."""
        n = len(rows)
        zero = self.constant(0.0)
        cells: dict[tuple[int, int], Jet] = {}
        for a in range(n):
            for b in range(a, n):
                node = rows[a][b]
                cells[(a, b)] = zero if node == ZERO else self.eval(node)
        return Jet.stack(
            [cells[(min(a, b), max(a, b))] for a in range(n) for b in range(n)], shape=(n, n)
        )


class CompiledExpr:
    """Pure evaluator mapping a base point to the order-3 jet of an expression."""

    def __init__(self, expr: ExprNode, spec: ManifoldSpec):
        self.expr = expr
        self.spec = spec

    def __call__(self, point: Sequence[float]) -> Jet:
        return JetContext(self.spec, point).eval(self.expr)

    def value(self, point: Sequence[float]) -> float:
        return float(self(point).value)


def compile_expr(expr: ExprNode, spec: ManifoldSpec) -> CompiledExpr:
    """Compile an expression against the names of a spec."""
    return CompiledExpr(expr, spec)


def metric_jet(spec: ManifoldSpec, point: Sequence[float]) -> Jet:
    """Jet of the metric components g_ab at a point."""
    return JetContext(spec, point).symmetric(spec.metric)


def vector_jet(nodes: Sequence[ExprNode], spec: ManifoldSpec, point: Sequence[float]) -> Jet:
    return JetContext(spec, point).vector(nodes)


def interior_point(spec: ManifoldSpec) -> np.ndarray:
    """Center of the domain box."""
    return np.array([(lo + hi) / 2.0 for lo, hi in spec.domain])
