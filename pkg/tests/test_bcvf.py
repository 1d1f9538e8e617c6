"""Tests for bi-conformal vector field checks and the Lie-derivative identity suite."""

import numpy as np
import pytest

from biconf.analysis import sample_points
from biconf.biconformal.bcvf import bcvf_check, bcvf_identity_suite
from biconf.core.config import settings
from biconf.core.errors import NotABCVF, UnknownVector
from biconf.dsl import parse_manifold

SHEAR = """
manifold shear {
  dim 2; coords x, y;
  metric { g[x,x] = 1; g[y,y] = 1; }
  projector block { leaf = x; }
  domain { x in [0, 1]; y in [0, 1]; }
  vector mix { xi[x] = y; }
  vector slide { xi[y] = 1; }
}
"""


def test_flat_generators_are_biconformal(corpus_spec):
    spec = corpus_spec("flat33")
    for x in sample_points(spec.domain, 2, seed=3):
        for name in spec.vectors:
            witness = bcvf_check(spec, name, x)
            assert witness.passed, name
            assert witness.declared_phi_deviation < 1e-12, name
            assert witness.declared_chi_deviation < 1e-12, name


def test_witness_tolerance_override():
    spec = parse_manifold(SHEAR)
    point = [0.4, 0.6]
    witness = bcvf_check(spec, "mix", point)
    assert witness.tolerance == settings.tolerances.bcvf
    assert not witness.passed
    # xi = (y, 0): the shear term is 1, scaled by 1 + max(|g|, |dxi|) = 2
    assert witness.residual == pytest.approx(0.5)
    relaxed = bcvf_check(spec, "mix", point, tolerance=1.0)
    assert relaxed.passed
    assert bcvf_identity_suite(spec, "mix", point, tolerance=1.0)


def test_dilation_gauges(corpus_spec):
    spec = corpus_spec("flat33")
    witness = bcvf_check(spec, "dx", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    assert witness.phi == pytest.approx(2.0)
    assert witness.chi == pytest.approx(0.0, abs=1e-14)
    assert witness.alpha == pytest.approx(1.0)
    assert witness.beta == pytest.approx(1.0)


def test_special_conformal_gauge_gradient(corpus_spec):
    spec = corpus_spec("flat33")
    point = [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]
    witness = bcvf_check(spec, "kx1", point)
    assert witness.phi == pytest.approx(4 * point[0])
    # phi = 4 x1 has a gradient along the leaf only
    np.testing.assert_allclose(witness.phi_bar, [4.0, 0, 0, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(witness.phi_star, 0.0, atol=1e-12)
    # the two projections recover the full gradient of phi = 4 x1
    gradient = witness.phi_bar + witness.phi_star
    np.testing.assert_allclose(gradient, [4.0, 0, 0, 0, 0, 0], atol=1e-12)


def test_holomorphic_fields_on_rank_two_leaf(corpus_spec):
    spec = corpus_spec("flat4_rank2")
    point = [0.4, -0.3, 0.2, 0.7]
    for name, phi in (("holo2", 4 * 0.4), ("holo3", 6 * (0.4**2 - 0.3**2))):
        witness = bcvf_check(spec, name, point)
        assert witness.passed
        assert witness.phi == pytest.approx(phi)


def test_identity_suite_on_genuine_fields(corpus_spec):
    tolerance = settings.tolerances.invariance
    for entry, name, point in (
        ("flat33", "kx2", [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]),
        ("biconf_flat_33", "kx1", [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]),
        ("stationary_umbilic", "rot", [0.2, 1.1, 1.3, 2.0]),
    ):
        spec = corpus_spec(entry)
        residuals = bcvf_identity_suite(spec, name, point)
        ids = {r.id for r in residuals}
        assert {"lie-S", "lie-T", "lie-A-plus-B", "lie-invariant-family"} <= ids
        for residual in residuals:
            assert residual.scaled < tolerance, (entry, residual.id, residual.scaled)


def test_cross_block_field_is_rejected():
    spec = parse_manifold(SHEAR)
    witness = bcvf_check(spec, "mix", [0.5, 0.5])
    assert not witness.passed
    assert witness.residual > 0.1
    with pytest.raises(NotABCVF) as info:
        bcvf_identity_suite(spec, "mix", [0.5, 0.5])
    assert info.value.fields == ("mix",)


def test_killing_translation_has_zero_gauges():
    spec = parse_manifold(SHEAR)
    witness = bcvf_check(spec, "slide", [0.5, 0.5])
    assert witness.passed
    assert witness.phi == 0.0
    assert witness.chi == 0.0
    assert witness.declared_phi_deviation is None


def test_unknown_vector(flat_2d):
    with pytest.raises(UnknownVector):
        bcvf_check(flat_2d, "missing", [0.5, 0.5])
