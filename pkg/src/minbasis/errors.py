"""Exception hierarchy.

Three families map onto the CLI exit codes: :class:`InputError` (2),
:class:`NumericalError` (3) and :class:`HypothesisError` (4).
"""


class MinBasisError(Exception):
    """Base class for every error raised by this package."""


class InputError(MinBasisError, ValueError):
    pass


class NumericalError(MinBasisError, ArithmeticError):
    pass


class HypothesisError(MinBasisError):
    """A mathematical precondition of the requested operation does not hold."""


class InvalidProfile(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class ProfileMismatch(InputError):
    pass


class DegreeTooSmall(InputError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class ResidualTooLarge(NumericalError):
    pass


class InconsistentSequence(NumericalError):
    pass


class ExtractionFailure(NumericalError):
    pass


class DualityLost(NumericalError):
    pass


class BoundViolation(NumericalError):
    pass


class NotFullNormalRank(HypothesisError):
    pass


class MinimalityRequired(HypothesisError):
    pass


class NotRobustBasis(HypothesisError):
    pass


class NotFTSR(HypothesisError):
    pass


class HypothesisFailed(HypothesisError):
    pass


class PreconditionFailed(HypothesisError):
    pass


class OutsideNeighborhood(HypothesisError):
    pass
