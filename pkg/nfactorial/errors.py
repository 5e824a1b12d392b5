"""Exception hierarchy for nfactorial"""


class NFactorialError(Exception):
    """Base class for every error raised by the library"""


class UsageError(NFactorialError, ValueError):
    """Invalid input: malformed partition, violated precondition, bad prime"""


class BoundExceeded(UsageError):
    """Requested size lies beyond the configured desk-scale bound"""


class FieldError(UsageError):
    """Operation is not defined over the requested coefficient field"""


class ExponentOverflow(NFactorialError, OverflowError):
    """Exponent arithmetic left the machine-width range"""


class QuotientBoundError(NFactorialError):
    """Degree bound reached before the graded quotient vanished"""


class ColengthError(NFactorialError):
    """Affine colength computation did not stabilize within its bound"""


class InvariantViolation(NFactorialError):
    """A constructed object breaks a structural invariant"""


class InternalBasisError(InvariantViolation):
    """A transformed basis vector fell outside the span it should stay in"""
