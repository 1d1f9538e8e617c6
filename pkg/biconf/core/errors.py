"""Exception hierarchy shared by every layer."""

from collections.abc import Iterable


class BiconfError(Exception):
    """Base class for all errors raised by biconf."""


# DSL


class DslError(BiconfError):
    """Problem in a manifold description source."""


class DslSyntaxError(DslError):
    """Unexpected token while parsing."""

    def __init__(
        self, message: str, line: int, column: int, expected: Iterable[str] = ()
    ):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


class DuplicateDefinition(DslError):
    pass


class UnknownIdentifier(DslError):
    pass


class DimensionMismatch(DslError):
    pass


class CyclicDefinition(DslError):
    pass


class InvalidDomain(DslError):
    pass


class MissingComponent(DslError):
    pass


# Evaluation


class EvaluationError(BiconfError):
    """Numerical evaluation failed at a point."""


class DomainError(EvaluationError):
    """Elementary function evaluated outside its domain."""

    def __init__(self, function: str, value: float):
        self.function = function
        self.value = value
        super().__init__(f"{function} undefined at constant term {value!r}")


class DivisionByZeroConstantTerm(EvaluationError):
    pass


class SingularMetric(EvaluationError):
    pass


class NotAProjector(EvaluationError):
    """A projector axiom failed at the probe point."""

    def __init__(self, axiom: str, residual: float):
        self.axiom = axiom
        self.residual = residual
        super().__init__(f"projector axiom '{axiom}' fails with residual {residual:.3e}")


class NonIntegerRank(EvaluationError):
    pass


class BlockSplitCrossTerms(EvaluationError):
    pass


class DegenerateNormals(EvaluationError):
    pass


class RankExcluded(EvaluationError):
    """Requested tensor has a vanishing denominator at this rank."""

    def __init__(self, tensor: str, denominator: str, n: int, p: int):
        self.tensor = tensor
        self.denominator = denominator
        super().__init__(
            f"{tensor} undefined for n={n}, p={p}: denominator {denominator} vanishes"
        )


class DimensionTooSmall(EvaluationError):
    pass


class ValenceMismatch(EvaluationError):
    pass


class JetOrderExhausted(EvaluationError):
    pass


# Analysis


class AnalysisError(BiconfError):
    """Invalid request to the analysis layer."""


class EmptyDomain(AnalysisError):
    pass


class NonPositiveRescale(AnalysisError):
    pass


class OutOfRange(AnalysisError):
    pass


class UnknownVector(AnalysisError):
    pass


class NotABCVF(AnalysisError):
    """Vector fields fail the bi-conformal condition."""

    def __init__(self, fields: Iterable[str], residual: float):
        self.fields = tuple(fields)
        self.residual = residual
        super().__init__(
            f"not bi-conformal: {', '.join(self.fields)} (residual {residual:.3e})"
        )


class NotBlockSplit(AnalysisError):
    pass


class LeafNotRank3(AnalysisError):
    pass


class UnknownTensor(AnalysisError):
    pass


class UnknownEntry(BiconfError):
    """No corpus entry has the requested id."""


class CorpusMismatch(BiconfError):
    """A corpus expectation did not hold."""

    def __init__(self, entry: str, subject: str, detail: str):
        self.entry = entry
        self.subject = subject
        self.detail = detail
        super().__init__(f"[{entry}] {subject}: {detail}")
