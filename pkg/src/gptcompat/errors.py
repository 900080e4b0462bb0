"""Exception hierarchy shared by all modules."""


class GptCompatError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(GptCompatError):
    pass


class DimensionMismatch(GptCompatError):
    pass


class DegeneratePolytope(GptCompatError):
    pass


class NotASimplex(GptCompatError):
    pass


class OutsidePolytope(GptCompatError):
    pass


class EffectInvalid(GptCompatError):
    """Function leaves [0, 1] on the state space by more than the tolerance."""


class InconsistentVertexValues(GptCompatError):
    """Vertex values do not come from an affine function."""


class DegenerateFacet(GptCompatError):
    pass


class CannotExpose(GptCompatError):
    pass


class ParameterOutOfRange(GptCompatError):
    pass


class BiasOutOfRange(ParameterOutOfRange):
    pass


class NumericalBreakdown(GptCompatError):
    pass


class NotOptimal(GptCompatError):
    pass


class SolverFailure(GptCompatError):
    pass


class InfeasibleP(GptCompatError):
    pass


class NotIncompatible(GptCompatError):
    pass


class DegenerateDual(GptCompatError):
    pass


class InvalidCertificate(GptCompatError):
    """A certificate condition failed; ``condition`` names which one."""

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or condition)


class SimplexInput(GptCompatError):
    pass


class SearchExhausted(GptCompatError):
    pass


class BadShape(GptCompatError):
    pass


class ParseError(GptCompatError):
    pass
