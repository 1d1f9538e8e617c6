"""Tests for the manifold description language."""

from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from biconf.core.errors import (
    BlockSplitCrossTerms,
    CyclicDefinition,
    DimensionMismatch,
    DslSyntaxError,
    DuplicateDefinition,
    InvalidDomain,
    MissingComponent,
    UnknownIdentifier,
)
from biconf.dsl import (
    BlockSplit,
    Normals,
    format_expr,
    format_manifold,
    parse_expression,
    parse_manifold,
)
from biconf.dsl.ast import ZERO, Coord, Neg, Number, Pow
from biconf.dsl.validate import validate_spec
from biconf.geometry.metric import eval_metric

TRIVIAL = """
manifold trivial {
  dim 2; coords x, y;
  metric { g[x,x] = 1; g[y,y] = 1; }
  projector block { leaf = x; }
  domain { x in [0, 1]; y in [0, 1]; }
}
"""


def _flat(metric: str, projector: str = "projector block { leaf = x; }") -> str:
    return f"""
manifold m {{
  dim 2; coords x, y;
  metric {{ {metric} }}
  {projector}
  domain {{ x in [0, 1]; y in [0, 1]; }}
}}
"""


def test_parse_trivial():
    spec = parse_manifold(TRIVIAL)
    assert spec.name == "trivial"
    assert spec.dim == 2
    assert spec.coords == ("x", "y")
    assert spec.metric == ((Number(1.0), ZERO), (ZERO, Number(1.0)))
    assert spec.projector == BlockSplit(("x",))
    assert spec.domain == ((0.0, 1.0), (0.0, 1.0))
    assert spec.vectors == {}


def test_unknown_coordinate_in_index():
    with pytest.raises(DimensionMismatch):
        parse_manifold(_flat("g[x,x] = 1; g[y,y] = 1; g[x,z] = 0;"))


def test_syntax_error_position():
    source = "manifold m {\n  dim 2;\n  coords x y;\n}"
    with pytest.raises(DslSyntaxError) as info:
        parse_manifold(source)
    assert info.value.line == 3
    assert info.value.column == 12
    assert "';'" in info.value.expected


def test_missing_diagonal():
    with pytest.raises(MissingComponent):
        parse_manifold(_flat("g[x,x] = 1; g[x,y] = 0.1;"))


def test_duplicate_metric_entry():
    with pytest.raises(DuplicateDefinition):
        parse_manifold(_flat("g[x,x] = 1; g[y,y] = 1; g[y,x] = 0; g[x,y] = 0;"))


def test_empty_domain_interval():
    source = TRIVIAL.replace("x in [0, 1]", "x in [1, 1]")
    with pytest.raises(InvalidDomain):
        parse_manifold(source)


def test_unknown_identifier_and_cycle():
    with pytest.raises(UnknownIdentifier):
        parse_manifold(_flat("g[x,x] = 1 + w; g[y,y] = 1;"))
    source = TRIVIAL.replace("metric", "func a = b + 1;\n  func b = a * 2;\n  metric")
    with pytest.raises(CyclicDefinition):
        parse_manifold(source)


def test_unary_minus_binds_tighter_than_pow(flat_2d):
    assert parse_expression("-x^2", flat_2d) == Pow(Neg(Coord("x", 0)), Fraction(2))
    assert parse_expression("-(x^2)", flat_2d) == Neg(Pow(Coord("x", 0), Fraction(2)))


def test_exponent_folds_to_fraction(flat_2d):
    assert parse_expression("x^(3/2)", flat_2d) == Pow(Coord("x", 0), Fraction(3, 2))
    assert parse_expression("x^(-1/4)", flat_2d).exponent == Fraction(-1, 4)
    assert parse_expression("x^2^2", flat_2d) == Pow(Coord("x", 0), Fraction(4))


def test_exponent_must_be_small_rational(flat_2d):
    with pytest.raises(DslSyntaxError):
        parse_expression("x^(1/5)", flat_2d)
    with pytest.raises(DslSyntaxError):
        parse_expression("x^y", flat_2d)


def test_format_expr_minimal_parentheses(flat_2d):
    for text in ("x - (y - 1)", "x / (y * 2.0)", "-x^2", "-(x^2)", "(x + y)^(1/2)"):
        node = parse_expression(text, flat_2d)
        assert parse_expression(format_expr(node), flat_2d) == node


def test_corpus_sources_round_trip(corpus):
    for entry in corpus.entries:
        spec = entry.spec()
        assert parse_manifold(format_manifold(spec)) == spec, entry.id


def test_normals_round_trip(corpus_spec):
    spec = corpus_spec("stationary_generic")
    assert isinstance(spec.projector, Normals)
    assert parse_manifold(format_manifold(spec)).projector == spec.projector


def test_example_metric_array(corpus_spec):
    spec = corpus_spec("stationary_generic")
    t, r, th, ph = 0.2, 1.1, 0.9, 2.0
    m = eval_metric(spec, [t, r, th, ph])
    s2 = np.sin(th) ** 2
    expected = np.array(
        [
            [r**4 * s2 - 1.0, 0.0, 0.0, r**4 * s2],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, r**2, 0.0],
            [r**4 * s2, 0.0, 0.0, r**2 * s2],
        ]
    )
    assert_allclose(m.g, expected, atol=1e-13)


def test_validate_rank_notes(corpus_spec):
    validated = validate_spec(corpus_spec("flatleaf_4"))
    assert validated.p == 3
    assert validated.q == 1
    assert any("rank-3 leaf" in note for note in validated.notes)
    assert any("rank-1 complement" in warning for warning in validated.warnings)


def test_validate_flags_rank_two(corpus_spec):
    validated = validate_spec(corpus_spec("flat4_rank2"))
    assert validated.p == 2
    assert len(validated.warnings) == 2
    assert validated.notes == ()


def test_block_split_rejects_cross_terms():
    spec = parse_manifold(_flat("g[x,x] = 1; g[y,y] = 1; g[x,y] = 0.1*x;"))
    with pytest.raises(BlockSplitCrossTerms):
        validate_spec(spec)
