"""Exception hierarchy.

Errors split into two families. ``SpectraError`` subclasses that are also
``ValueError`` report bad input. ``InvariantViolation`` subclasses report a
failed internal assertion: a bound or identity that the mathematics
guarantees did not hold, which means there is a bug.
"""


class SpectraError(Exception):
    pass


class InputError(SpectraError, ValueError):
    pass


class InvariantViolation(SpectraError, AssertionError):
    pass


# -- parsing and validation

class EmptyInput(InputError):
    pass


class MalformedToken(InputError):
    pass


class NotStrictlyIncreasing(InputError):
    pass


class NonPositiveEntry(InputError):
    pass


class NonPositiveInput(InputError):
    pass


class NonPositiveScalar(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InconsistentProfile(InputError):
    pass


# -- linear algebra and polyhedra

class NotSquare(InputError):
    pass


class SingularMatrix(InputError):
    pass


class NotFeasible(InputError):
    pass


class InternalInfeasibility(InvariantViolation):
    pass


class UnboundedDirection(InvariantViolation):
    pass


# -- cover calculus

class NotCovered(InputError):
    pass


class NotFCovered(InputError):
    pass


class ZeroVector(InputError):
    pass


class HypothesisViolated(InputError):
    pass


# -- canonicalization

class BoundViolation(InvariantViolation):
    pass


class EquivalenceViolation(InvariantViolation):
    pass


# -- search

class UnsupportedSize(InputError):
    pass


class CheckpointCorrupt(SpectraError):
    pass


class BudgetExhausted(SpectraError):
    """Raised when a work budget runs out; ``partial`` holds the resumable state."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
