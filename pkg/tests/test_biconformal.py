"""Tests for the bi-conformal basis, connection, curvature and foliation obstructions."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from biconf.biconformal import PointEvaluation, leaf_cotton_oracle, leaf_weyl
from biconf.core.errors import LeafNotRank3, RankExcluded
from biconf.jets import max_abs


def _worst(points, getter):
    return max(max_abs(getter(point)) / point.scale for point in points)


def test_flat_blocks_are_decomposable(corpus_points):
    for point in corpus_points("flat33"):
        assert max_abs(point.basis.nabla_P) < 1e-13
        assert max_abs(point.basis.T) < 1e-13
        assert max_abs(point.bar_curvature.T4) < 1e-12


def test_conformal_factors_keep_T_zero(corpus_points):
    points = corpus_points("biconf_flat_33")
    assert _worst(points, lambda pt: pt.basis.T) < 1e-12
    assert _worst(points, lambda pt: pt.basis.nabla_P) > 1e-3


def test_perturbation_breaks_separability(corpus_points):
    assert _worst(corpus_points("perturbed_5"), lambda pt: pt.basis.T) > 1e-3


def test_T_is_trace_free(corpus_points):
    for point in corpus_points("stationary_generic"):
        proj = point.projector
        T = point.basis.T.value
        assert_allclose(np.einsum("abc,bc->a", T, proj.P_uu.value), 0.0, atol=1e-12)
        assert_allclose(np.einsum("abc,bc->a", T, proj.Pi_uu.value), 0.0, atol=1e-12)


def test_mixed_projectors_are_parallel_when_separable(corpus_points):
    for point in corpus_points("conf_sep_cotton_5"):
        curv = point.bar_curvature
        assert max_abs(curv.nabla_bar_P_mixed) < 1e-12
        assert max_abs(curv.nabla_bar_Pi_mixed) < 1e-12


def test_leaf_cotton_matches_induced_metric(corpus_spec, corpus_points):
    spec = corpus_spec("conf_sep_cotton_5")
    for point in corpus_points("conf_sep_cotton_5"):
        oracle = leaf_cotton_oracle(spec, point.point)
        block = point.foliation.cotton0.value[:3, :3, :3]
        assert np.max(np.abs(oracle)) > 1e-3
        assert_allclose(block, oracle, atol=1e-8)


def test_leaf_cotton_needs_rank_three(corpus_spec):
    spec = corpus_spec("conf_sep_7")
    with pytest.raises(LeafNotRank3):
        leaf_cotton_oracle(spec, [1.0] * 7)


def test_T4_is_twice_the_leaf_weyl(corpus_spec, corpus_points):
    spec = corpus_spec("conf_sep_7")
    for point in corpus_points("conf_sep_7"):
        T4 = point.bar_curvature.T4.value
        weyl = leaf_weyl(spec, point.point)
        assert np.max(np.abs(weyl)) > 1e-3
        assert_allclose(T4[:4, :4, :4, :4], 2.0 * weyl, atol=1e-8)
        rest = T4.copy()
        rest[:4, :4, :4, :4] = 0.0
        assert_allclose(rest, 0.0, atol=1e-8)
        assert_allclose(point.bar_curvature.Cpar.value, T4, atol=1e-8)


def test_rank_two_excludes_T4(corpus_points):
    point = corpus_points("flat4_rank2", count=1)[0]
    assert point.p == 2
    with pytest.raises(RankExcluded) as info:
        point.bar_curvature.T4
    assert info.value.denominator == "2-p"
    with pytest.raises(RankExcluded):
        point.foliation.cotton0


def test_rank_one_complement_excludes_L1(corpus_points):
    point = corpus_points("flatleaf_4", count=1)[0]
    assert point.q == 1
    with pytest.raises(RankExcluded):
        point.bar_curvature.L1
    # the leaf side is still defined
    assert point.bar_curvature.L0.shape == (4, 4)


def test_projected_cotton_without_separability(corpus_points):
    points = corpus_points("flatleaf_cross_4")
    assert _worst(points, lambda pt: pt.basis.T) > 1e-4
    assert _worst(points, lambda pt: pt.foliation.cotton0_projected) < 1e-8
    assert _worst(points, lambda pt: pt.foliation.cotton0) > 1e-4


def test_u_form_is_closed_for_one_factor(corpus_points):
    for point in corpus_points("conf_reducible_5"):
        assert max_abs(point.foliation.du) < 1e-10
    assert _worst(corpus_points("conf_sep_cotton_5"), lambda pt: pt.foliation.du) > 1e-4


def test_rescaled_jets_reproduce_the_pipeline(corpus_spec, corpus_points):
    original = corpus_points("stationary_umbilic", count=1)[0]
    rebuilt = PointEvaluation.from_jets(
        original.point, original.metric.g_jet, original.projector.P_dd
    )
    assert rebuilt.p == original.p
    assert_allclose(
        rebuilt.bar_curvature.riemann_bar.value,
        original.bar_curvature.riemann_bar.value,
        atol=1e-14,
    )


def test_seven_dimensional_projections(corpus_points):
    point = corpus_points("conf_sep_7", count=1)[0]
    curv = point.bar_curvature
    T4 = curv.T4.value
    for projected, ud in (
        (curv.Cpar, point.projector.P_ud.value),
        (curv.Cperp, point.projector.Pi_ud.value),
    ):
        assert projected.shape == (7, 7, 7, 7)
        expected = np.einsum("rstq,dr,sc,ta,qb->dcab", T4, ud, ud, ud, ud)
        assert_allclose(projected.value, expected, atol=1e-12)
    assert point.foliation.u.shape == (7,)
