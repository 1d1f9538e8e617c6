"""Base obstruction-tensor implementation and the registering decorator."""

from collections.abc import Callable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from biconf.core.errors import RankExcluded
from biconf.core.types import RankGuard

if TYPE_CHECKING:
    from biconf.biconformal.pipeline import PointEvaluation

Evaluator = Callable[["PointEvaluation"], np.ndarray]


class BaseObstruction:
    """Base implementation of the ObstructionTensor protocol."""

    def __init__(
        self,
        id: str,
        description: str,
        func: Evaluator,
        guards: Sequence[RankGuard] = (),
        aliases: Sequence[str] = (),
    ):
        self._id = id
        self._description = description
        self._func = func
        self._guards = tuple(guards)
        self.aliases = tuple(aliases)

    @property
    def id(self) -> str:
        return self._id

    @property
    def description(self) -> str:
        return self._description

    @property
    def guards(self) -> tuple[RankGuard, ...]:
        return self._guards

    def check_rank(self, n: int, p: int) -> None:
        """Raise RankExcluded when a guarded denominator vanishes."""
        for guard in self._guards:
            if guard.blocks(n, p):
                raise RankExcluded(self._id, guard.denominator, n, p)

    def evaluate(self, point: "PointEvaluation") -> np.ndarray:
        self.check_rank(point.n, point.p)
        return np.asarray(self._func(point), dtype=float)

    def __repr__(self) -> str:
        return f"BaseObstruction({self._id!r})"


def obstruction(
    id: str,
    description: str | None = None,
    guards: Sequence[RankGuard] = (),
    aliases: Sequence[str] = (),
):
    """Decorator to register a per-point tensor evaluator as an obstruction."""

    def decorator(func: Evaluator) -> BaseObstruction:
        tensor = BaseObstruction(
            id=id,
            description=description or (func.__doc__ or id).strip().splitlines()[0],
            func=func,
            guards=guards,
            aliases=aliases,
        )

        # Auto-register the tensor
        from biconf.core.tensor_registry import get_registry

        get_registry().register(tensor)

        return tensor

    return decorator
