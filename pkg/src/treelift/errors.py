"""Exception hierarchy.

Three families map onto CLI exit codes: malformed input (:class:`ParseError`),
violated preconditions (:class:`HypothesisViolated`) and construction bugs
(:class:`InternalInvariantBroken`).
"""


class VoltageError(Exception):
    pass


class ParseError(VoltageError, ValueError):
    pass


class HypothesisViolated(VoltageError, ValueError):
    """A documented precondition of a construction does not hold."""


class InvalidTree(HypothesisViolated):
    pass


class NonUnit(HypothesisViolated):
    pass


class NotAPath(HypothesisViolated):
    pass


class InvalidParams(HypothesisViolated):
    pass


class NotOrderPreserving(HypothesisViolated):
    pass


class OddVertexCount(HypothesisViolated):
    pass


class EndpointVoltageMismatch(HypothesisViolated):
    pass


class OddCount(HypothesisViolated):
    pass


class EmptyInput(HypothesisViolated):
    pass


class NotOddShifting(HypothesisViolated):
    pass


class NotAPartition(HypothesisViolated):
    pass


class NotInternallyDisjoint(HypothesisViolated):
    pass


class PathNotOddShifting(HypothesisViolated):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"decomposition path {index} is not odd shifting")


class NotProperlyWeighted(HypothesisViolated):
    pass


class NotPrime(HypothesisViolated):
    pass


class PrimeTooSmall(HypothesisViolated):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class Collision(PrimeTooSmall):
    pass


class NotDivisible(HypothesisViolated):
    pass


class ConditionNotMet(HypothesisViolated):
    pass


class EmptySupport(HypothesisViolated):
    pass


class NotGenerator(HypothesisViolated):
    pass


class ParamsRejected(HypothesisViolated):
    pass


class TooLarge(HypothesisViolated):
    pass


class IndexOutOfRange(VoltageError, IndexError):
    pass


class InternalInvariantBroken(VoltageError, RuntimeError):
    """A construction produced something its own proof rules out."""
