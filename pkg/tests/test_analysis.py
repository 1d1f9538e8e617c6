"""Tests for sampling, obstruction reports, classification, bounds, rescaling and rank."""

import importlib
import logging

import numpy as np
import pytest

from biconf.analysis import (
    TIERS,
    canonical_json,
    classify,
    dimension_bound,
    independence_rank,
    leaf_criterion,
    narrative,
    obstruction_report,
    rescale_invariance_check,
    sample_points,
)
from biconf.core.errors import (
    EmptyDomain,
    NonPositiveRescale,
    NotABCVF,
    OutOfRange,
    RankExcluded,
)
from biconf.core.types import TierStatus
from biconf.dsl import parse_manifold

classify_module = importlib.import_module("biconf.analysis.classify")

TWINS = """
manifold twins {
  dim 4; coords x1, x2, y1, y2;
  metric { g[x1,x1] = 1; g[x2,x2] = 1; g[y1,y1] = 1; g[y2,y2] = 1; }
  projector block { leaf = x1, x2; }
  domain { x1 in [-1, 1]; x2 in [-1, 1]; y1 in [-1, 1]; y2 in [-1, 1]; }
  vector rot { xi[x1] = -x2; xi[x2] = x1; }
  vector rot2 { xi[x1] = -2*x2; xi[x2] = 2*x1; }
  vector shift { xi[y1] = 1; }
  vector bad { xi[x1] = y1; }
}
"""


@pytest.fixture
def twins():
    return parse_manifold(TWINS)


# sampling


def test_samples_are_deterministic():
    domain = [(0.0, 1.0), (-2.0, 2.0)]
    first = sample_points(domain, 5, seed=11)
    again = sample_points(domain, 5, seed=11)
    other = sample_points(domain, 5, seed=12)
    np.testing.assert_array_equal(first.points, again.points)
    assert not np.array_equal(first.points, other.points)
    assert len(first) == 5


def test_samples_respect_margin():
    samples = sample_points([(0.0, 1.0)], 200, seed=1, margin=0.25)
    assert samples.points.min() >= 0.25
    assert samples.points.max() <= 0.75


def test_sampling_rejects_bad_requests():
    with pytest.raises(OutOfRange):
        sample_points([(0.0, 1.0)], 0)
    with pytest.raises(EmptyDomain):
        sample_points([(0.0, 1.0)], 3, margin=0.5)


# obstruction reports


def test_flat_obstruction_report(flat_2d):
    samples = sample_points(flat_2d.domain, 3, seed=5)
    report = obstruction_report(flat_2d, "gradP", samples)
    assert report.vanishes
    assert report.max_scaled_residual == 0.0
    assert len(report.per_point) == 3


def test_alias_resolves_to_registered_id(corpus_spec):
    spec = corpus_spec("perturbed_5")
    samples = sample_points(spec.domain, 2, seed=5)
    report = obstruction_report(spec, "T_abc", samples)
    assert report.tensor == "Tabc"
    assert report.verdict == "nonzero"


def test_rank_excluded_tensor_raises(corpus_spec):
    spec = corpus_spec("flat4_rank2")
    samples = sample_points(spec.domain, 1, seed=5)
    with pytest.raises(RankExcluded):
        obstruction_report(spec, "T4", samples)


# bounds


def test_dimension_bound_formulas():
    for n in range(2, 13):
        for p in range(1, n):
            bound = dimension_bound(n, p)
            q = n - p
            assert bound.n_statement == p * (p + 1) // 2 + q * (q + 1) // 2
            assert bound.n_proof - bound.n_statement == n + 2
            assert bound.finite == (p >= 3 and q >= 3)
            assert bound.note


def test_dimension_bound_flat_blocks():
    bound = dimension_bound(6, 3)
    assert (bound.n_statement, bound.n_proof) == (12, 20)
    assert bound.finite


@pytest.mark.parametrize(("n", "p"), [(4, 0), (4, 4), (3, 5)])
def test_dimension_bound_out_of_range(n, p):
    with pytest.raises(OutOfRange):
        dimension_bound(n, p)


# classification


def test_leaf_criterion():
    assert leaf_criterion(1, "P") is None
    assert leaf_criterion(2, "Pi") is None
    assert leaf_criterion(3, "P") == "cotton0_projected"
    assert leaf_criterion(3, "Pi") == "cotton1_projected"
    assert leaf_criterion(4, "P") == "Cpar"
    assert leaf_criterion(5, "Pi") == "Cperp"


def test_classify_flat_blocks(corpus_spec):
    spec = corpus_spec("flat33")
    report = classify(spec, sample_points(spec.domain, 2, seed=2))
    assert set(report.tiers) == set(TIERS)
    assert all(status is TierStatus.YES for status in report.tiers.values())
    assert {"gradP", "Tabc", "du", "T4"} <= {t.id for t in report.tensors}
    assert report.bounds.finite
    assert len(narrative(report)) == len(TIERS)


def test_classify_rank_two(corpus_spec):
    spec = corpus_spec("flat4_rank2")
    report = classify(spec, sample_points(spec.domain, 2, seed=2))
    assert report.tiers["decomposable"] is TierStatus.YES
    assert report.tiers["leaf_P_conformally_flat"] is TierStatus.INDETERMINATE
    assert report.tiers["bi_conformally_flat"] is TierStatus.INDETERMINATE
    assert not report.bounds.finite
    assert any("rank-2" in note for note in report.notes)


def test_classify_not_separable(corpus_spec):
    spec = corpus_spec("perturbed_5")
    report = classify(spec, sample_points(spec.domain, 2, seed=2))
    assert report.tiers["conformally_separable"] is TierStatus.NO
    assert report.tiers["conformally_reducible"] is TierStatus.NO
    assert report.tiers["bi_conformally_flat"] is TierStatus.NO


def _implications_hold(report) -> None:
    tiers = report.tiers
    yes = TierStatus.YES
    if tiers["decomposable"] is yes:
        assert tiers["conformally_reducible"] is yes
    if tiers["conformally_reducible"] is yes:
        assert tiers["conformally_separable"] is yes
    if tiers["bi_conformally_flat"] is yes:
        assert tiers["conformally_separable"] is yes
        assert tiers["leaf_P_conformally_flat"] is yes
        assert tiers["leaf_Pi_conformally_flat"] is yes


def test_tier_implications_on_corpus(corpus):
    for entry in corpus.entries:
        spec = entry.spec()
        report = classify(spec, sample_points(spec.domain, 2, seed=5))
        _implications_hold(report)


def test_decomposable_needs_separable(corpus_spec):
    spec = corpus_spec("perturbed_5")
    samples = sample_points(spec.domain, 2, seed=2)
    gradient = obstruction_report(spec, "gradP", samples).max_scaled_residual
    trace_free = obstruction_report(spec, "Tabc", samples).max_scaled_residual
    assert gradient < trace_free
    report = classify(spec, samples, threshold=0.5 * (gradient + trace_free))
    assert report.tiers["conformally_separable"] is TierStatus.NO
    assert report.tiers["decomposable"] is TierStatus.NO
    assert any(note.startswith("decomposable:") for note in report.notes)
    _implications_hold(report)


def test_bi_conformal_flatness_follows_T4(corpus_spec):
    spec = corpus_spec("biconf_flat_33")
    report = classify(spec, sample_points(spec.domain, 2, seed=2))
    verdicts = {t.id: t.verdict for t in report.tensors}
    assert verdicts["T4"] == "vanishes"
    assert report.tiers["bi_conformally_flat"] is TierStatus.YES

    spec = corpus_spec("conf_sep_7")
    report = classify(spec, sample_points(spec.domain, 1, seed=2))
    verdicts = {t.id: t.verdict for t in report.tensors}
    assert verdicts["T4"] == "nonzero"
    assert report.tiers["bi_conformally_flat"] is TierStatus.NO


def test_nonzero_T4_overrides_flat_leaves(corpus_spec, monkeypatch):
    # leaves judged by a tensor that vanishes here, T4 does not
    monkeypatch.setattr(classify_module, "leaf_criterion", lambda rank, side: "Tabc")
    spec = corpus_spec("conf_sep_7")
    report = classify(spec, sample_points(spec.domain, 1, seed=2))
    assert report.tiers["leaf_P_conformally_flat"] is TierStatus.YES
    assert report.tiers["leaf_Pi_conformally_flat"] is TierStatus.YES
    assert report.tiers["bi_conformally_flat"] is TierStatus.NO
    assert "bi_conformally_flat: T4 does not vanish" in report.notes


def test_threshold_monotonicity(corpus_spec):
    """Raising the threshold can only turn nonzero verdicts into vanishing ones."""
    spec = corpus_spec("perturbed_5")
    samples = sample_points(spec.domain, 2, seed=4)
    strict = obstruction_report(spec, "Tabc", samples, threshold=1e-7)
    loose = obstruction_report(spec, "Tabc", samples, threshold=10.0)
    assert strict.max_scaled_residual == loose.max_scaled_residual
    assert strict.verdict == "nonzero"
    assert loose.verdict == "vanishes"


def test_canonical_json_is_stable(corpus_spec):
    spec = corpus_spec("flat4_rank2")
    first = classify(spec, sample_points(spec.domain, 2, seed=9))
    second = classify(spec, sample_points(spec.domain, 2, seed=9))
    assert canonical_json(first) == canonical_json(second)
    assert canonical_json(first).encode() == canonical_json(second).encode()


# rescaling


def test_unit_rescale_is_exact(corpus_spec):
    spec = corpus_spec("conf_sep_7")
    report = rescale_invariance_check(spec, "1", "1", sample_points(spec.domain, 1, seed=3))
    assert report.max_scaled_deviation == 0.0
    assert {q.quantity for q in report.quantities} >= {"Cpar", "Cperp", "Lambda"}


def test_rescale_keeps_leaf_obstructions(corpus_spec):
    spec = corpus_spec("conf_sep_7")
    report = rescale_invariance_check(
        spec, "exp(0.3*x1*y2)", "2 + sin(x3 + y1)", sample_points(spec.domain, 1, seed=3)
    )
    assert report.max_scaled_deviation < 1e-8


def test_rescale_must_be_positive(corpus_spec):
    spec = corpus_spec("flat33")
    samples = sample_points(spec.domain, 1, seed=3)
    with pytest.raises(NonPositiveRescale):
        rescale_invariance_check(spec, "x1", "1", samples)


def test_rescale_logs_unevaluable_points(corpus_spec, caplog):
    spec = corpus_spec("flat33")
    samples = sample_points(spec.domain, 1, seed=3)
    # log(1 + x1) is undefined on the x1 = -1 corners
    with caplog.at_level(logging.WARNING, logger="biconf.analysis.rescale"):
        rescale_invariance_check(spec, "exp(log(1 + x1))", "1", samples)
    skipped = [r for r in caplog.records if "skipped at" in r.getMessage()]
    assert len(skipped) == 32
    assert all("x1=-1" in r.getMessage() for r in skipped)


def test_rescale_rank_excluded(corpus_spec):
    spec = corpus_spec("flat4_rank2")
    with pytest.raises(RankExcluded):
        rescale_invariance_check(spec, "2", "3", sample_points(spec.domain, 1, seed=3))


# independence


def test_independence_counts_constant_multiples_once(twins):
    samples = sample_points(twins.domain, 4, seed=8)
    assert independence_rank(twins, ["rot", "rot2"], samples) == 1
    assert independence_rank(twins, ["rot", "rot2", "shift"], samples) == 2
    assert independence_rank(twins, [], samples) == 0


def test_independence_requires_bcvf(twins):
    samples = sample_points(twins.domain, 2, seed=8)
    with pytest.raises(NotABCVF) as info:
        independence_rank(twins, ["rot", "bad"], samples)
    assert info.value.fields == ("bad",)


def test_flat_blocks_have_twenty_generators(corpus_spec):
    spec = corpus_spec("flat33")
    samples = sample_points(spec.domain, 6, seed=8)
    assert independence_rank(spec, list(spec.vectors), samples) == 20
