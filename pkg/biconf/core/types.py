"""Shared dataclasses and typing protocols."""

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Protocol, runtime_checkable

import numpy as np

if TYPE_CHECKING:
    from biconf.biconformal.pipeline import PointEvaluation


class TierStatus(str, Enum):
    """Outcome of one classification tier."""

    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"

    @classmethod
    def of(cls, flag: bool) -> "TierStatus":
        return cls.YES if flag else cls.NO


@dataclass(frozen=True)
class IdentityResidual:
    """Scaled residual of one identity check at one point."""

    id: str
    residual: float
    scale: float = 1.0
    informational: bool = False

    @property
    def scaled(self) -> float:
        return self.residual / self.scale


@dataclass(frozen=True)
class RankGuard:
    """A denominator that must not vanish for a tensor to be defined.

    ``excluded`` lists forbidden values of ``p`` (on the leaf side) or
    ``n - p`` (on the complement side).
    """

    side: str  # "p" or "q"
    excluded: tuple[int, ...]
    denominator: str

    def blocks(self, n: int, p: int) -> bool:
        rank = p if self.side == "p" else n - p
        return rank in self.excluded


@runtime_checkable
class ObstructionTensor(Protocol):
    """Protocol for tensors that can be reported on over a sample set."""

    aliases: tuple[str, ...]

    @property
    def id(self) -> str:
        """Tensor identifier used by reports and the CLI."""
        ...

    @property
    def description(self) -> str:
        """One-line description for listings."""
        ...

    @property
    def guards(self) -> tuple[RankGuard, ...]:
        """Rank exclusions under which the tensor is undefined."""
        ...

    def check_rank(self, n: int, p: int) -> None:
        """Raise RankExcluded when the tensor is undefined at (n, p)."""
        ...

    def evaluate(self, point: "PointEvaluation") -> np.ndarray:
        """Components of the tensor at one evaluated point."""
        ...


@runtime_checkable
class TensorRegistry(Protocol):
    """Protocol for obstruction-tensor registries."""

    def register(self, tensor: ObstructionTensor) -> None:
        """Register a tensor."""
        ...

    def get_tensor(self, name: str) -> ObstructionTensor | None:
        """Get a tensor by id or alias."""
        ...

    def require(self, name: str) -> ObstructionTensor:
        """Get a tensor or raise UnknownTensor."""
        ...

    def list_tensors(self) -> list[ObstructionTensor]:
        """List all registered tensors."""
        ...
