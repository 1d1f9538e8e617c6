"""Contractions and matrix inversion over tensor-valued jets."""

import itertools
import math

import numpy as np

from biconf.core.errors import DimensionMismatch, SingularMetric
from biconf.jets.jet import Jet
from biconf.jets.multiindex import multi_index_table

# Reserved einsum label for the jet coefficient axis.
_JET_AXIS = "Z"

Operand = Jet | np.ndarray


def einsum(subscripts: str, *operands: Operand) -> Operand:
    """``np.einsum`` over jets and plain arrays, contracted one pair at a time.

    Each step contracts the pair with the smallest intermediate, so operand
    order never blows up memory. Any jet operand makes the result a jet
    truncated to the lowest order involved. Subscripts use lowercase letters only.
    """
    inputs, output = subscripts.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(operands):
        raise ValueError(f"{subscripts!r} expects {len(terms)} operands, got {len(operands)}")
    if _JET_AXIS in subscripts:
        raise ValueError(f"label {_JET_AXIS!r} is reserved")

    sizes: dict[str, int] = {}
    for sub, operand in zip(terms, operands, strict=True):
        shape = operand.shape if isinstance(operand, Jet) else np.shape(operand)
        sizes.update(zip(sub, shape, strict=True))

    pending = list(zip(terms, operands, strict=True))
    while len(pending) > 1:
        i, j, keep = _cheapest_pair(pending, output, sizes)
        (left_sub, left), (right_sub, right) = pending[i], pending[j]
        rest = [item for k, item in enumerate(pending) if k not in (i, j)]
        pending = [(keep, _contract(left_sub, left, right_sub, right, keep)), *rest]

    sub, operand = pending[0]
    if isinstance(operand, Jet):
        coeffs = np.einsum(f"{sub}Z->{output}Z", operand.coeffs)
        return Jet(coeffs, operand.n, operand.order)
    return np.einsum(f"{sub}->{output}", operand)


def _cheapest_pair(
    pending: list[tuple[str, Operand]], output: str, sizes: dict[str, int]
) -> tuple[int, int, str]:
    # greedy: smallest growth in stored components, then least arithmetic
    def size(labels) -> int:
        return math.prod(sizes[c] for c in labels)

    best: tuple[int, int, int, int, str] | None = None
    for i, j in itertools.combinations(range(len(pending)), 2):
        left, right = pending[i][0], pending[j][0]
        later = "".join(sub for k, (sub, _) in enumerate(pending) if k not in (i, j)) + output
        keep = "".join(dict.fromkeys(c for c in left + right if c in later))
        growth = size(keep) - size(left) - size(right)
        work = size(set(left + right))
        if best is None or (growth, work) < best[:2]:
            best = (growth, work, i, j, keep)
    assert best is not None
    return best[2], best[3], best[4]


def _contract(
    left_sub: str, left: Operand, right_sub: str, right: Operand, keep: str
) -> Operand:
    if isinstance(left, Jet) and isinstance(right, Jet):
        if left.n != right.n:
            raise DimensionMismatch(f"jets in {left.n} and {right.n} variables")
        order = min(left.order, right.order)
        table = multi_index_table(left.n, order)
        products = np.einsum(
            f"{left_sub}Z,{right_sub}Z->{keep}Z",
            left.truncate(order).coeffs[..., table.left],
            right.truncate(order).coeffs[..., table.right],
        )
        return Jet(np.add.reduceat(products, table.starts, axis=-1), left.n, order)
    if isinstance(left, Jet):
        coeffs = np.einsum(f"{left_sub}Z,{right_sub}->{keep}Z", left.coeffs, right)
        return Jet(coeffs, left.n, left.order)
    if isinstance(right, Jet):
        coeffs = np.einsum(f"{left_sub},{right_sub}Z->{keep}Z", left, right.coeffs)
        return Jet(coeffs, right.n, right.order)
    return np.einsum(f"{left_sub},{right_sub}->{keep}", left, right)


def inv(matrix: Jet, singular_tol: float = 1e-12) -> Jet:
    """Inverse of a square matrix jet.

    With A = A0 + N (N nilpotent) the inverse is sum_k (-A0^-1 N)^k A0^-1,
    which terminates after ``order`` terms.
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"cannot invert a jet of shape {matrix.shape}")
    value = matrix.value
    scale = max(1.0, float(np.max(np.abs(value))))
    if abs(np.linalg.det(value)) < singular_tol * scale ** value.shape[0]:
        raise SingularMetric(f"matrix is singular (det={np.linalg.det(value):.3e})")
    a0 = Jet.constant(np.linalg.inv(value), matrix.n, matrix.order)
    q = -einsum("ij,jk->ik", a0, matrix.nilpotent())
    term = a0
    result = a0
    for _ in range(matrix.order):
        term = einsum("ij,jk->ik", q, term)
        result = result + term
    return result


def max_abs(tensor: Operand) -> float:
    """Largest absolute constant-term component (0 for empty tensors)."""
    values = tensor.value if isinstance(tensor, Jet) else np.asarray(tensor)
    return float(np.max(np.abs(values))) if np.size(values) else 0.0
