"""Numerical rank of a family of bi-conformal vector fields."""

from collections.abc import Sequence

import numpy as np

from biconf.analysis.sampling import SampleSet, parallel_map
from biconf.biconformal.bcvf import bcvf_check
from biconf.core.config import settings
from biconf.core.errors import NotABCVF
from biconf.core.logging import get_logger
from biconf.dsl.ast import ManifoldSpec

logger = get_logger(__name__)


def independence_rank(spec: ManifoldSpec, names: Sequence[str], samples: SampleSet) -> int:
    """Count fields independent over the constants.

    Each field contributes one row: its components at every sample point,
    concatenated. The rank counts singular values above
    ``tolerances.rank`` times the largest one. Every field must pass the
    bi-conformal check first.
    """
    if not names:
        return 0
    rows = []
    offenders: dict[str, float] = {}
    for name in names:
        witnesses = parallel_map(lambda x, name=name: bcvf_check(spec, name, x), samples)
        worst = max(w.residual for w in witnesses)
        if not all(w.passed for w in witnesses):
            offenders[name] = worst
        rows.append(np.concatenate([w.xi for w in witnesses]))
    if offenders:
        raise NotABCVF(sorted(offenders), max(offenders.values()))

    singular = np.linalg.svd(np.vstack(rows), compute_uv=False)
    if singular[0] == 0.0:
        return 0
    rank = int(np.count_nonzero(singular > settings.tolerances.rank * singular[0]))
    logger.info(f"{spec.name}: {len(names)} fields span a rank-{rank} family")
    return rank
