"""Sampling, obstruction reports, classification and invariance checks."""

from biconf.analysis.bounds import dimension_bound
from biconf.analysis.classify import TIERS, classify, leaf_criterion, narrative
from biconf.analysis.independence import independence_rank
from biconf.analysis.obstructions import obstruction_report, report_from_evaluations
from biconf.analysis.reports import (
    ClassificationReport,
    DimensionBound,
    IdentityOutcome,
    ObstructionReport,
    QuantityDeviation,
    RescaleReport,
    TensorSummary,
    canonical_json,
)
from biconf.analysis.rescale import rescale_invariance_check
from biconf.analysis.sampling import SampleSet, evaluate_samples, parallel_map, sample_points

__all__ = [
    "TIERS",
    "ClassificationReport",
    "DimensionBound",
    "IdentityOutcome",
    "ObstructionReport",
    "QuantityDeviation",
    "RescaleReport",
    "SampleSet",
    "TensorSummary",
    "canonical_json",
    "classify",
    "dimension_bound",
    "evaluate_samples",
    "independence_rank",
    "leaf_criterion",
    "narrative",
    "obstruction_report",
    "parallel_map",
    "report_from_evaluations",
    "rescale_invariance_check",
    "sample_points",
]
