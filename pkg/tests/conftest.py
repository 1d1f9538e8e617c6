"""Shared fixtures for the biconf test suite."""

import numpy as np
import pytest

from biconf.analysis import sample_points
from biconf.biconformal.pipeline import PointEvaluation
from biconf.corpus import load_corpus
from biconf.dsl import parse_manifold

FLAT_2D = """
manifold m {
  dim 2; coords x, y;
  metric { g[x,x] = 1; g[y,y] = 1; }
  projector block { leaf = x; }
  domain { x in [0, 1]; y in [0, 1]; }
}
"""

SPHERE_2D = """
manifold sphere {
  dim 2; coords th, ph;
  metric { g[th,th] = 1; g[ph,ph] = sin(th)^2; }
  projector block { leaf = th; }
  domain { th in [0.5, 2.5]; ph in [0, 6]; }
}
"""


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_spec(corpus):
    """Parsed spec of a corpus entry by id."""
    cache = {}

    def get(entry_id: str):
        if entry_id not in cache:
            cache[entry_id] = corpus.get(entry_id).spec()
        return cache[entry_id]

    return get


@pytest.fixture(scope="session")
def corpus_points(corpus_spec):
    """A few evaluated sample points of a corpus entry."""
    cache = {}

    def get(entry_id: str, count: int = 3, seed: int = 7):
        key = (entry_id, count, seed)
        if key not in cache:
            spec = corpus_spec(entry_id)
            samples = sample_points(spec.domain, count, seed)
            cache[key] = [PointEvaluation.at(spec, x) for x in samples]
        return cache[key]

    return get


@pytest.fixture
def flat_2d():
    return parse_manifold(FLAT_2D)


@pytest.fixture
def sphere_2d():
    return parse_manifold(SPHERE_2D)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
