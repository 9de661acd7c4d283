"""Exception hierarchy for the laminal package.

Errors are named after the contract they report so callers (and the CLI
exit-code mapping) can branch on type instead of message text.
"""


class LaminalError(Exception):
    """Base class for every error raised by this package."""


class ModelError(LaminalError, ValueError):
    """A model construction or model operation contract was violated."""


class RowSumError(ModelError):
    """A probability row does not sum to exactly 1."""


class NegativeProbability(ModelError):
    """A probability entry is negative."""


class DeadSamplePoint(ModelError):
    """A sample point has probability zero under every parameter value."""


class DuplicateLabel(ModelError):
    """A label occurs more than once on the same axis."""


class EpsilonOutOfRange(ModelError):
    """The perturbation parameter lies outside its admissible interval."""


class ZeroProbabilityEvent(ModelError):
    """A conditioning event has probability zero under some parameter value."""


class NotAncillary(ModelError):
    """The supplied statistic has a parameter-dependent marginal distribution."""


class WeightArityMismatch(ModelError):
    """The number of mixture weights differs from the number of blocks."""


class InvalidWeights(ModelError):
    """Mixture weights are negative or do not sum to exactly 1."""


class UnknownSampleLabel(ModelError):
    """An observed value is not part of the sample space."""


class ThetaSpaceMismatch(ModelError):
    """Two inference bases do not share the same parameter labels."""


class ModelFormatError(ModelError):
    """The model text format is malformed."""


class NotSCEquivalent(LaminalError):
    """The operation requires a pair already equivalent under stable conditionality."""


class GroundSetMismatch(LaminalError):
    """Partitions (or a partition and a model) have different ground sets."""


class EmptyInput(LaminalError):
    """A nonempty collection was required."""


class SizeCapExceeded(LaminalError):
    """An exhaustive enumeration would exceed the configured size cap."""


class InternalCheckError(LaminalError):
    """A redundant internal cross-check failed; this indicates a bug."""
