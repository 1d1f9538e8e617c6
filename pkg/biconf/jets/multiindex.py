"""Multi-index enumeration and the product/derivative tables for truncated jets."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial

import numpy as np

JET_ORDER = 3


def jet_size(n: int, order: int = JET_ORDER) -> int:
    """Number of monomials of total degree <= order in n variables."""
    return comb(n + order, order)


@dataclass(frozen=True, eq=False)
class MultiIndexTable:
    """Graded-lexicographic monomial basis of degree <= order in n variables.

    Monomials of lower degree form a prefix, so truncating a jet to a lower
    order is a slice of its coefficient array.
    """

    n: int
    order: int
    exponents: np.ndarray  # (K, n)
    positions: dict[tuple[int, ...], int]
    # Cauchy product: pairs (left[t], right[t]) feed output slot out[t];
    # entries are sorted by output so np.add.reduceat over `starts` sums them.
    left: np.ndarray
    right: np.ndarray
    starts: np.ndarray
    # d/dx_i maps target slot j of the (order-1) table to source[i, j] with
    # factor scale[i, j].
    source: np.ndarray
    scale: np.ndarray
    factorials: np.ndarray  # alpha! per slot

    @property
    def size(self) -> int:
        return len(self.exponents)

    def degree(self, slot: int) -> int:
        return int(self.exponents[slot].sum())

    def slot(self, alpha: tuple[int, ...]) -> int:
        return self.positions[tuple(int(a) for a in alpha)]


def _enumerate(n: int, order: int) -> list[tuple[int, ...]]:
    monomials: list[tuple[int, ...]] = []
    for degree in range(order + 1):
        for combo in combinations_with_replacement(range(n), degree):
            alpha = [0] * n
            for var in combo:
                alpha[var] += 1
            monomials.append(tuple(alpha))
    return monomials


@lru_cache(maxsize=None)
def multi_index_table(n: int, order: int = JET_ORDER) -> MultiIndexTable:
    """Build (and cache) the table for n variables up to the given order."""
    if n < 1:
        raise ValueError(f"jets need at least one variable, got n={n}")
    if not 0 <= order <= JET_ORDER:
        raise ValueError(f"jet order must lie in [0, {JET_ORDER}], got {order}")

    monomials = _enumerate(n, order)
    positions = {alpha: k for k, alpha in enumerate(monomials)}
    exponents = np.array(monomials, dtype=np.int64).reshape(len(monomials), n)
    degrees = exponents.sum(axis=1)

    triples = []
    for i, a in enumerate(monomials):
        for j, b in enumerate(monomials):
            if degrees[i] + degrees[j] <= order:
                out = positions[tuple(x + y for x, y in zip(a, b, strict=True))]
                triples.append((out, i, j))
    triples.sort()
    outs = np.array([t[0] for t in triples], dtype=np.int64)
    left = np.array([t[1] for t in triples], dtype=np.int64)
    right = np.array([t[2] for t in triples], dtype=np.int64)
    starts = np.flatnonzero(np.r_[True, outs[1:] != outs[:-1]])

    if order >= 1:
        lower = _enumerate(n, order - 1)
        source = np.zeros((n, len(lower)), dtype=np.int64)
        scale = np.zeros((n, len(lower)))
        for i in range(n):
            for j, beta in enumerate(lower):
                raised = list(beta)
                raised[i] += 1
                source[i, j] = positions[tuple(raised)]
                scale[i, j] = raised[i]
    else:
        source = np.zeros((n, 0), dtype=np.int64)
        scale = np.zeros((n, 0))

    factorials = np.array(
        [np.prod([factorial(int(e)) for e in alpha]) for alpha in monomials],
        dtype=float,
    )

    return MultiIndexTable(
        n=n,
        order=order,
        exponents=exponents,
        positions=positions,
        left=left,
        right=right,
        starts=starts,
        source=source,
        scale=scale,
        factorials=factorials,
    )
