"""Tests for the static identity battery."""

import pytest

from biconf.biconformal.identities import compare, is_separable, static_identities
from biconf.core.config import settings
from biconf.jets import Jet

ENTRIES = (
    "biconf_flat_33",
    "conf_sep_cotton_5",
    "perturbed_5",
    "stationary_generic",
    "flatleaf_cross_4",
)


@pytest.mark.parametrize("entry", ENTRIES)
def test_static_identities_hold(corpus_points, entry):
    tolerance = settings.tolerances.identity
    for point in corpus_points(entry, count=2):
        for residual in static_identities(point):
            if residual.informational:
                continue
            assert residual.scaled < tolerance, (entry, residual.id, residual.scaled)


def test_separable_identities_only_where_T_vanishes(corpus_points):
    separable = corpus_points("conf_sep_cotton_5", count=1)[0]
    generic = corpus_points("perturbed_5", count=1)[0]
    assert is_separable(separable)
    assert not is_separable(generic)
    assert "parallel-mixed-P" in {r.id for r in static_identities(separable)}
    assert "parallel-mixed-P" not in {r.id for r in static_identities(generic)}


def test_rank_guards_skip_L_identities(corpus_points):
    ids = {r.id for r in static_identities(corpus_points("flat4_rank2", count=1)[0])}
    assert "antisymmetric-L0" not in ids
    assert "antisymmetric-L1" not in ids
    assert "bar-bianchi-first" in ids


def test_conjectures_are_informational(corpus_points):
    residuals = static_identities(corpus_points("conf_sep_7", count=1)[0])
    conjectures = [r for r in residuals if r.id.startswith("conjecture-")]
    assert {r.id for r in conjectures} == {"conjecture-curl-L0", "conjecture-curl-L1"}
    assert all(r.informational for r in conjectures)


def test_compare_scales_by_larger_side(corpus_points):
    point = corpus_points("flat33", count=1)[0]
    lhs = Jet.constant([100.0, 0.0], point.n)
    rhs = Jet.constant([99.0, 0.0], point.n)
    residual = compare("example", point, lhs, rhs)
    assert residual.residual == pytest.approx(1.0)
    assert residual.scale == pytest.approx(101.0)
    assert residual.scaled == pytest.approx(1.0 / 101.0)
