"""Tests for order-3 Taylor jets."""

from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from biconf.core.errors import DimensionMismatch, DomainError, JetOrderExhausted
from biconf.dsl import compile_expr, parse_expression
from biconf.jets import Jet, einsum, inv, jet_size, max_abs

TEMPLATES = (
    "exp({a}*x*y) + sin({b}*x + y^2)",
    "log(2 + {a}*x^2 + y^2) * cos({b}*y)",
    "sqrt(3 + {a}*x*y) / (1 + {b}*x^2)",
    "(1 + {a}*x)^(3/2) * tan({b}*y)",
    "x^3*y - {a}*y^(1/2) + exp(-({b}*x))",
)


def _expressions(rng):
    for template in TEMPLATES:
        for _ in range(10):
            a, b = rng.uniform(0.2, 0.9, size=2)
            yield template.format(a=f"{a:.4f}", b=f"{b:.4f}")


def _central(f, x, axis, h):
    e = np.zeros_like(x)
    e[axis] = h
    return (f(x + e) - f(x - e)) / (2 * h)


def test_jet_size():
    assert jet_size(2) == 10
    assert jet_size(7) == 120


def test_polynomial_exact():
    point = [0.5, -1.2]
    x, y = Jet.variable(0, point), Jet.variable(1, point)
    f = x * x * y + 3.0 * y * y * y
    assert f.partial((0, 0)) == pytest.approx(0.5**2 * -1.2 + 3 * (-1.2) ** 3, abs=1e-13)
    assert f.partial((1, 0)) == pytest.approx(2 * 0.5 * -1.2, abs=1e-13)
    assert f.partial((1, 1)) == pytest.approx(1.0, abs=1e-13)
    assert f.partial((2, 1)) == pytest.approx(2.0, abs=1e-13)
    assert f.partial((0, 3)) == pytest.approx(18.0, abs=1e-13)
    assert f.partial((3, 0)) == pytest.approx(0.0, abs=1e-13)


def test_derivatives_match_finite_differences(flat_2d, rng):
    """First and second partials to 1e-5, third to 1e-3."""
    for text in _expressions(rng):
        expr = compile_expr(parse_expression(text, flat_2d), flat_2d)
        point = rng.uniform(0.2, 0.8, size=2)
        jet = expr(point)

        def f(p):
            return expr.value(p)

        for axis in range(2):
            alpha = [0, 0]
            alpha[axis] = 1
            assert_allclose(jet.partial(alpha), _central(f, point, axis, 1e-5), atol=1e-5)

            def df(p, axis=axis):
                return _central(f, p, axis, 1e-4)

            for other in range(2):
                beta = list(alpha)
                beta[other] += 1
                second = _central(df, point, other, 1e-3)
                assert_allclose(jet.partial(beta), second, rtol=1e-5, atol=1e-5, err_msg=text)

        h = 1e-2
        e = np.array([h, 0.0])
        third = (f(point + 2 * e) - 2 * f(point + e) + 2 * f(point - e) - f(point - 2 * e)) / (
            2 * h**3
        )
        assert_allclose(jet.partial((3, 0)), third, rtol=1e-3, atol=1e-3, err_msg=text)


def test_grad_lowers_order_and_mixing_truncates():
    x = Jet.variable(0, [0.3, 0.4])
    g = (x * x).grad()
    assert g.order == 2
    assert g.shape == (2,)
    mixed = g[0] + x
    assert mixed.order == 2
    assert_allclose(mixed.value, 2 * 0.3 + 0.3)


def test_einsum_matches_elementwise_products():
    point = [0.2, 0.7]
    x, y = Jet.variable(0, point), Jet.variable(1, point)
    v = Jet.stack([x, y])
    dot = einsum("a,a->", v, v)
    expected = x * x + y * y
    assert_allclose(dot.coeffs, expected.coeffs, atol=1e-15)
    outer = einsum("a,b->ab", v, np.array([1.0, 2.0]))
    assert outer.shape == (2, 2)
    assert_allclose(outer[1, 1].coeffs, (2.0 * y).coeffs, atol=1e-15)


def test_chain_contraction_ignores_operand_order(rng):
    # the naive left-to-right chain would hold an 8-index jet of 7 variables
    n = 7
    tensor = Jet.constant(rng.normal(size=(n, n, n, n)), n)
    projector = Jet.constant(rng.normal(size=(n, n)), n)
    contracted = einsum("dr,sc,ta,qb,rstq->dcab", projector, projector, projector, projector, tensor)
    p, t = projector.value, tensor.value
    expected = np.einsum("rstq,dr,sc,ta,qb->dcab", t, p, p, p, p)
    assert contracted.shape == (n, n, n, n)
    assert_allclose(contracted.value, expected, atol=1e-10)
    assert_allclose(contracted.coeffs[..., 1:], 0.0)


def test_repeated_label_trace():
    point = [0.2, 0.7]
    x, y = Jet.variable(0, point), Jet.variable(1, point)
    m = Jet.stack([x, y, y, x * y], shape=(2, 2))
    trace = einsum("aa->", m)
    assert_allclose(trace.coeffs, (x + x * y).coeffs, atol=1e-15)


def test_inverse_jet():
    point = [0.4, -0.3]
    x, y = Jet.variable(0, point), Jet.variable(1, point)
    a = Jet.stack([x + 2.0, y, y, x * x + 3.0], shape=(2, 2))
    product = einsum("ij,jk->ik", inv(a), a)
    identity = Jet.constant(np.eye(2), 2)
    assert_allclose(product.coeffs, identity.coeffs, atol=1e-12)


def test_elementary_identities():
    point = [0.4, 0.9]
    x, y = Jet.variable(0, point), Jet.variable(1, point)
    u = x * y + 0.5
    assert_allclose((u.exp().log()).coeffs, u.coeffs, atol=1e-13)
    assert_allclose((u.sin() * u.sin() + u.cos() * u.cos()).coeffs, Jet.constant(1.0, 2).coeffs, atol=1e-13)
    assert_allclose((u.sqrt() * u.sqrt()).coeffs, u.coeffs, atol=1e-13)
    assert_allclose(u.power(Fraction(3, 2)).coeffs, (u * u.sqrt()).coeffs, atol=1e-13)
    assert_allclose((u / u).coeffs, Jet.constant(1.0, 2).coeffs, atol=1e-13)


def test_domain_errors():
    x = Jet.variable(0, [-0.5, 0.0])
    with pytest.raises(DomainError):
        x.log()
    with pytest.raises(DomainError):
        x.sqrt()


def test_order_exhausted():
    x = Jet.variable(0, [0.1, 0.2])
    with pytest.raises(JetOrderExhausted):
        x.partial((4, 0))
    with pytest.raises(JetOrderExhausted):
        x.grad().grad().grad().grad()


def test_mismatched_variables():
    with pytest.raises(DimensionMismatch):
        Jet.variable(0, [0.1, 0.2]) + Jet.variable(0, [0.1, 0.2, 0.3])


def test_max_abs_uses_constant_terms():
    x = Jet.variable(0, [-2.0, 1.0])
    assert max_abs(Jet.stack([x, 3.0 * x])) == pytest.approx(6.0)
