"""Manifold description language: parsing, printing, compilation and validation."""

from biconf.dsl.ast import BlockSplit, Explicit, ManifoldSpec, Normals, VectorSpec
from biconf.dsl.compiler import JetContext, compile_expr
from biconf.dsl.parser import parse_expression, parse_manifold
from biconf.dsl.printer import format_expr, format_manifold

__all__ = [
    "BlockSplit",
    "Explicit",
    "JetContext",
    "ManifoldSpec",
    "Normals",
    "VectorSpec",
    "compile_expr",
    "format_expr",
    "format_manifold",
    "parse_expression",
    "parse_manifold",
]
