"""Deterministic sample points and concurrent per-point evaluation."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

from biconf.biconformal.pipeline import PointEvaluation
from biconf.core.config import settings
from biconf.core.errors import EmptyDomain, OutOfRange
from biconf.dsl.ast import ManifoldSpec

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Points drawn uniformly from the margin-shrunk domain box.

    The generator is numpy's PCG64 seeded with ``seed``, so identical
    (seed, count, domain, margin) give identical points.
    """

    points: np.ndarray
    seed: int
    margin: float

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def sample_points(
    domain: Sequence[tuple[float, float]],
    count: int,
    seed: int | None = None,
    margin: float | None = None,
) -> SampleSet:
    seed = settings.run.seed if seed is None else seed
    margin = settings.run.margin if margin is None else margin
    if count < 1:
        raise OutOfRange(f"sample count must be at least 1, got {count}")
    bounds = np.asarray(domain, dtype=float).reshape(-1, 2)
    width = bounds[:, 1] - bounds[:, 0]
    lo = bounds[:, 0] + margin * width
    hi = bounds[:, 1] - margin * width
    if np.any(hi <= lo):
        raise EmptyDomain(f"domain {bounds.tolist()} is empty after a {margin} margin")
    rng = np.random.Generator(np.random.PCG64(seed))
    points = lo + (hi - lo) * rng.random((count, len(bounds)))
    return SampleSet(points=points, seed=seed, margin=margin)


def parallel_map(func: Callable[[np.ndarray], T], samples: SampleSet) -> list[T]:
    """Apply ``func`` to every point, results in sample order."""
    workers = settings.concurrency.workers
    if workers <= 1:
        return [func(x) for x in samples]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, samples))


def evaluate_samples(spec: ManifoldSpec, samples: SampleSet) -> list[PointEvaluation]:
    return parallel_map(lambda x: PointEvaluation.at(spec, x), samples)
