"""Report models and their canonical serialization."""

import json
from typing import Literal

from pydantic import BaseModel, Field

from biconf.core.types import TierStatus

Verdict = Literal["vanishes", "nonzero"]


class ObstructionReport(BaseModel):
    """Scaled residuals of one tensor over a sample set."""

    tensor: str
    per_point: list[float]
    max_scaled_residual: float
    scale: float
    threshold: float
    verdict: Verdict

    @property
    def vanishes(self) -> bool:
        return self.verdict == "vanishes"


class TensorSummary(BaseModel):
    id: str
    max_scaled_residual: float
    verdict: Verdict


class DimensionBound(BaseModel):
    """Upper bounds on the number of independent bi-conformal vector fields."""

    n: int
    p: int
    n_statement: int
    n_proof: int
    finite: bool
    note: str = ""


class ClassificationReport(BaseModel):
    manifold: str
    seed: int
    points: int
    threshold: float
    tensors: list[TensorSummary] = Field(default_factory=list)
    tiers: dict[str, TierStatus] = Field(default_factory=dict)
    bounds: DimensionBound
    notes: list[str] = Field(default_factory=list)


class QuantityDeviation(BaseModel):
    quantity: str
    max_deviation: float
    scaled_deviation: float


class RescaleReport(BaseModel):
    manifold: str
    z: str
    x: str
    points: int
    quantities: list[QuantityDeviation]

    @property
    def max_scaled_deviation(self) -> float:
        return max((q.scaled_deviation for q in self.quantities), default=0.0)


class IdentityOutcome(BaseModel):
    id: str
    max_scaled_residual: float
    informational: bool = False


def canonical_json(model: BaseModel) -> str:
    """Stable-key-order JSON rendering of a report."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2)
