"""Exception hierarchy shared by all modules."""


class TriangleCompError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TriangleCompError, ValueError):
    """Input data violates a documented precondition."""


# perm
class RepeatedPoint(ValidationError):
    pass


class PointOutOfRange(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


# group
class NotTransitive(ValidationError):
    pass


class NotABlockSystem(ValidationError):
    pass


# triangle
class DomainMismatch(ValidationError):
    pass


class DegreeTooLarge(ValidationError):
    pass


class NotFound(TriangleCompError):
    """A randomized search exhausted its budget. Not a proof of nonexistence."""

    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts


# compose
class CompositionError(ValidationError):
    pass


class HandleClash(CompositionError):
    pass


class DiagramUncovered(CompositionError):
    pass


class MixedK(CompositionError):
    pass


class NotAHandle(CompositionError):
    pass


class NotTransitiveInput(CompositionError):
    pass


class CrossingHandles(CompositionError):
    """Two spliced handles interleave on one (xy)-cycle, or their spans differ."""


class NotCommuting(CompositionError):
    pass


class PointsNotDistinct(CompositionError):
    pass


class BadIdentityFirst(CompositionError):
    pass


class BlocksNotPartition(CompositionError):
    pass


class HandlesNotDisjoint(CompositionError):
    pass


class BadCycleType(CompositionError):
    pass


class NotTransitiveAlphaBeta(CompositionError):
    pass


# analyze
class BlocksMissing(ValidationError):
    pass


class NotAPowerOfReferenceCycle(ValidationError):
    pass


class WrongProvenance(ValidationError):
    pass


class HypothesisFailed(ValidationError):
    def __init__(self, hypothesis):
        super().__init__(f"hypothesis failed: {hypothesis}")
        self.hypothesis = hypothesis


# cli
class MalformedFile(TriangleCompError):
    """A representation file is not valid JSON or lacks required fields."""
