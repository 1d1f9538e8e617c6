"""Tests for the built-in corpus and its runner."""

import json

import pytest
import yaml
from click.testing import CliRunner
from pydantic import ValidationError

from biconf.analysis import evaluate_samples, report_from_evaluations, sample_points
from biconf.apps.cli import cli
from biconf.core.config import settings
from biconf.core.errors import CorpusMismatch, UnknownEntry
from biconf.core.types import TierStatus
from biconf.corpus import load_corpus, run_corpus, run_entry
from biconf.corpus.loader import CORPUS_FILE
from biconf.dsl.validate import validate_spec


def test_corpus_size_and_order(corpus):
    ids = [entry.id for entry in corpus.entries]
    assert len(ids) >= 8
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)


def test_every_source_validates(corpus):
    for entry in corpus.entries:
        validated = validate_spec(entry.spec())
        assert validated.name == entry.id
        for name in entry.vectors:
            assert name in validated.spec.vectors, (entry.id, name)


def test_every_entry_records_provenance(corpus):
    kinds = {entry.kind for entry in corpus.entries}
    assert kinds <= {"literature", "trivial", "derived"}
    for entry in corpus.entries:
        assert entry.provenance, entry.id
        assert entry.citation.strip(), entry.id
    assert len({entry.citation for entry in corpus.entries}) == len(corpus.entries)


def test_missing_citation_is_rejected(tmp_path):
    data = yaml.safe_load(CORPUS_FILE.read_text(encoding="utf-8"))
    del data["entries"][0]["citation"]
    path = tmp_path / "corpus.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    with pytest.raises(ValidationError):
        load_corpus(path)


def test_unknown_entry(corpus):
    with pytest.raises(UnknownEntry):
        corpus.get("no_such_entry")


def test_unknown_tier_is_rejected(tmp_path):
    data = yaml.safe_load(CORPUS_FILE.read_text(encoding="utf-8"))
    data["entries"][0]["tiers"] = {"hyperbolic": "yes"}
    path = tmp_path / "corpus.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    with pytest.raises(ValidationError):
        load_corpus(path)


def test_unknown_tensor_is_rejected(tmp_path):
    data = yaml.safe_load(CORPUS_FILE.read_text(encoding="utf-8"))
    data["entries"][0]["vanishing"] = ["Bach"]
    path = tmp_path / "corpus.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    with pytest.raises(ValidationError):
        load_corpus(path)


@pytest.mark.parametrize("entry_id", ["flat4_rank2", "stationary_umbilic", "conf_reducible_5"])
def test_cheap_entries_pass(corpus, entry_id):
    outcome = run_entry(corpus.get(entry_id), points=3, seed=21)
    assert outcome.id == entry_id
    assert outcome.points == 3
    assert outcome.checks > 0
    assert outcome.worst_identity_residual < 1e-9


def test_corrupted_rank_is_reported(corpus):
    entry = corpus.get("flat4_rank2").model_copy(update={"rank": 3})
    with pytest.raises(CorpusMismatch) as info:
        run_entry(entry, points=3, seed=21)
    assert info.value.entry == "flat4_rank2"
    assert info.value.subject == "rank"


def test_corrupted_tier_is_reported(corpus):
    entry = corpus.get("stationary_umbilic")
    tiers = dict(entry.tiers, conformally_separable=TierStatus.NO)
    with pytest.raises(CorpusMismatch) as info:
        run_entry(entry.model_copy(update={"tiers": tiers}), points=2, seed=21)
    assert info.value.subject == "conformally_separable"


def test_run_corpus_selection(corpus):
    outcomes = run_corpus(corpus, ["stationary_umbilic", "flat4_rank2"], points=2, seed=5)
    assert [o.id for o in outcomes] == ["flat4_rank2", "stationary_umbilic"]


def test_vanishing_and_genuine_obstructions_are_separated(corpus):
    threshold = settings.run.threshold
    for entry in corpus.entries:
        spec = entry.spec()
        evaluations = evaluate_samples(spec, sample_points(spec.domain, 2, seed=11))
        for tensor_id in entry.vanishing:
            noise = report_from_evaluations(tensor_id, evaluations).max_scaled_residual
            assert noise <= 1e-10, (entry.id, tensor_id, noise)
        for tensor_id, floor in entry.nonzero.items():
            assert floor >= 1e3 * threshold, (entry.id, tensor_id)
            magnitude = report_from_evaluations(tensor_id, evaluations).max_scaled_residual
            assert magnitude >= floor, (entry.id, tensor_id, magnitude)


@pytest.mark.slow
def test_full_corpus_at_default_points(corpus):
    result = CliRunner().invoke(cli, ["corpus", "run", "--format", "canonical"])
    assert result.exit_code == 0, result.output
    outcomes = json.loads(result.output)["entries"]
    assert [o["id"] for o in outcomes] == [entry.id for entry in corpus.entries]
    for outcome in outcomes:
        assert outcome["points"] == settings.run.points
        assert outcome["checks"] > 0
        assert outcome["worst_identity_residual"] < settings.tolerances.identity
