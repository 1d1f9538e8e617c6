"""Truncated multivariate Taylor jets with tensor-valued coefficients."""

from collections.abc import Sequence
from fractions import Fraction
from math import factorial

import numpy as np

from biconf.core.errors import (
    DimensionMismatch,
    DivisionByZeroConstantTerm,
    DomainError,
    JetOrderExhausted,
)
from biconf.jets.multiindex import JET_ORDER, MultiIndexTable, multi_index_table

Scalar = float | int | np.ndarray


class Jet:
    """Taylor coefficients of a (tensor-valued) function at a point.

    ``coeffs`` has shape ``(*shape, K)`` where the last axis runs over the
    graded-lex monomials of degree <= ``order`` and ``coeffs[..., alpha]``
    holds ``d^alpha f / alpha!``. Jets are treated as immutable.
    """

    __slots__ = ("coeffs", "n", "order")
    __array_ufunc__ = None

    def __init__(self, coeffs: np.ndarray, n: int, order: int = JET_ORDER):
        coeffs = np.asarray(coeffs, dtype=float)
        expected = multi_index_table(n, order).size
        if coeffs.ndim == 0 or coeffs.shape[-1] != expected:
            raise ValueError(
                f"jet of order {order} in {n} variables needs {expected} coefficients"
            )
        self.coeffs = coeffs
        self.n = n
        self.order = order

    # construction

    @classmethod
    def constant(cls, value: Scalar, n: int, order: int = JET_ORDER) -> "Jet":
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((*value.shape, multi_index_table(n, order).size))
        coeffs[..., 0] = value
        return cls(coeffs, n, order)

    @classmethod
    def variable(cls, index: int, point: Sequence[float]) -> "Jet":
        n = len(point)
        if not 0 <= index < n:
            raise DimensionMismatch(f"variable {index} out of range for n={n}")
        coeffs = np.zeros(multi_index_table(n).size)
        coeffs[0] = point[index]
        coeffs[1 + index] = 1.0
        return cls(coeffs, n)

    @staticmethod
    def stack(jets: Sequence["Jet"], shape: tuple[int, ...] | None = None) -> "Jet":
        """Stack equally shaped jets along a new leading axis (optionally reshaped)."""
        order = min(j.order for j in jets)
        n = jets[0].n
        coeffs = np.stack([j.truncate(order).coeffs for j in jets])
        if shape is not None:
            coeffs = coeffs.reshape(*shape, coeffs.shape[-1])
        return Jet(coeffs, n, order)

    # introspection

    @property
    def table(self) -> MultiIndexTable:
        return multi_index_table(self.n, self.order)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[..., 0]

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, n={self.n}, order={self.order})"

    def __getitem__(self, key) -> "Jet":
        key = key if isinstance(key, tuple) else (key,)
        if len(key) > self.ndim or any(k is Ellipsis or k is None for k in key):
            raise IndexError("jet indexing addresses tensor axes only")
        return Jet(self.coeffs[key], self.n, self.order)

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        size = multi_index_table(self.n, order).size
        return Jet(self.coeffs[..., :size], self.n, order)

    def nilpotent(self) -> "Jet":
        coeffs = self.coeffs.copy()
        coeffs[..., 0] = 0.0
        return Jet(coeffs, self.n, self.order)

    def partial(self, alpha: Sequence[int]) -> np.ndarray:
        """Raw partial derivative d^alpha f at the base point."""
        if len(alpha) != self.n:
            raise DimensionMismatch(f"multi-index of length {len(alpha)} for n={self.n}")
        if sum(alpha) > self.order:
            raise JetOrderExhausted(
                f"derivative of degree {sum(alpha)} exceeds jet order {self.order}"
            )
        table = self.table
        slot = table.slot(tuple(alpha))
        return self.coeffs[..., slot] * table.factorials[slot]

    def grad(self) -> "Jet":
        """Jet of the coordinate gradient; the derivative index is appended last."""
        if self.order == 0:
            raise JetOrderExhausted("cannot differentiate an order-0 jet")
        table = self.table
        coeffs = self.coeffs[..., table.source] * table.scale
        return Jet(coeffs, self.n, self.order - 1)

    def derivatives(self, count: int) -> np.ndarray:
        """Array of all raw partials of the given degree, derivative indexes last."""
        jet = self
        for _ in range(count):
            jet = jet.grad()
        return jet.value

    # arithmetic

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.n != self.n:
                raise DimensionMismatch(f"jets in {self.n} and {other.n} variables")
            return other
        return Jet.constant(other, self.n, self.order)

    def __neg__(self) -> "Jet":
        return Jet(-self.coeffs, self.n, self.order)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        other = self._coerce(other)
        order = min(self.order, other.order)
        return Jet(
            self.truncate(order).coeffs + other.truncate(order).coeffs, self.n, order
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Jet":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            factor = np.asarray(other, dtype=float)
            return Jet(self.coeffs * factor[..., None], self.n, self.order)
        other = self._coerce(other)
        order = min(self.order, other.order)
        table = multi_index_table(self.n, order)
        left = self.truncate(order).coeffs[..., table.left]
        right = other.truncate(order).coeffs[..., table.right]
        return Jet(np.add.reduceat(left * right, table.starts, axis=-1), self.n, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            divisor = np.asarray(other, dtype=float)
            if np.any(divisor == 0.0):
                raise DivisionByZeroConstantTerm("division by zero constant")
            return Jet(self.coeffs / divisor[..., None], self.n, self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, exponent) -> "Jet":
        return self.power(Fraction(exponent))

    # elementary functions

    def compose(self, series: Sequence[np.ndarray]) -> "Jet":
        """Evaluate sum_k series[k] * h^k with h the nilpotent part (Horner)."""
        h = self.nilpotent()
        result = Jet.constant(series[-1] * np.ones(self.shape), self.n, self.order)
        for coefficient in reversed(series[:-1]):
            result = result * h + coefficient
        return result

    def _series(self, derivatives: Sequence[np.ndarray]) -> "Jet":
        return self.compose(
            [d / factorial(k) for k, d in enumerate(derivatives[: self.order + 1])]
        )

    def reciprocal(self) -> "Jet":
        a0 = self.value
        if np.any(a0 == 0.0):
            raise DivisionByZeroConstantTerm("reciprocal of a jet with zero constant term")
        return self.compose([(-1.0) ** k / a0 ** (k + 1) for k in range(self.order + 1)])

    def exp(self) -> "Jet":
        e = np.exp(self.value)
        return self._series([e, e, e, e])

    def log(self) -> "Jet":
        a0 = self.value
        _require(a0 > 0.0, "log", a0)
        return self._series([np.log(a0), 1.0 / a0, -1.0 / a0**2, 2.0 / a0**3])

    def sin(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self._series([s, c, -s, -c])

    def cos(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self._series([c, -s, -c, s])

    def tan(self) -> "Jet":
        a0 = self.value
        _require(np.abs(np.cos(a0)) > 1e-12, "tan", a0)
        t = np.tan(a0)
        d1 = 1.0 + t * t
        return self._series([t, d1, 2.0 * t * d1, d1 * (2.0 + 6.0 * t * t)])

    def sqrt(self) -> "Jet":
        return self.power(Fraction(1, 2), name="sqrt")

    def power(self, exponent: Fraction, name: str = "pow") -> "Jet":
        q = Fraction(exponent)
        if q.denominator == 1:
            k = q.numerator
            if k < 0:
                return self._integer_power(-k).reciprocal()
            return self._integer_power(k)
        a0 = self.value
        if np.all(a0 == 0.0) and not np.any(self.coeffs) and q > 0:
            return Jet(np.zeros_like(self.coeffs), self.n, self.order)
        _require(a0 > 0.0, name, a0)
        qf = float(q)
        falling = [1.0, qf, qf * (qf - 1.0), qf * (qf - 1.0) * (qf - 2.0)]
        return self._series([falling[k] * a0 ** (qf - k) for k in range(4)])

    def _integer_power(self, k: int) -> "Jet":
        result = Jet.constant(np.ones(self.shape), self.n, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


def _require(condition, function: str, a0) -> None:
    condition = np.asarray(condition)
    if not np.all(condition):
        offending = np.asarray(a0)[~condition] if condition.shape else a0
        raise DomainError(function, float(np.ravel(offending)[0]))


def jet_lift(
    point: Sequence[float], *, constant: float | None = None, variable: int | None = None
) -> Jet:
    """Lift a constant or a coordinate variable to an order-3 jet at ``point``."""
    if (constant is None) == (variable is None):
        raise ValueError("lift exactly one of constant= or variable=")
    if variable is not None:
        return Jet.variable(variable, point)
    return Jet.constant(float(constant), len(point))  # type: ignore[arg-type]


def jet_partial(jet: Jet, alpha: Sequence[int]) -> float:
    """Raw partial ``alpha! * coeffs[alpha]`` of a scalar jet."""
    return float(jet.partial(alpha))
