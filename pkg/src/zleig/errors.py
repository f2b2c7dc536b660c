"""Exception hierarchy shared by all zleig modules.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit statuses (2 = validation, 3 = not Z-linear, 4 = numeric).
"""


class ZleigError(Exception):
    exit_code = 1


class ValidationError(ZleigError):
    exit_code = 2


class CycleDetected(ValidationError):
    """Input relations are not a strict partial order."""


class OutOfRange(ValidationError):
    """A relation endpoint falls outside 1..n."""


class CapExceeded(ValidationError):
    """Enumeration would exceed the configured extension cap."""


class NotFibonacci(ValidationError):
    """A requested factor is not a Fibonacci number >= 2."""


class NotRowBalanced(ValidationError):
    """Rows of a symbolic matrix carry different symbol multisets."""


class DimensionMismatch(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotUnitRowSum(ValidationError):
    pass


class NotZLinear(ZleigError):
    """An eigenvalue failed to decode as an integer combination of symbols."""

    exit_code = 3


class NumericError(ZleigError):
    exit_code = 4


class NoConvergence(NumericError):
    """The shifted-QR iteration hit its sweep cap."""


class NotSimultaneouslyDiagonalizable(NumericError):
    """A masked batch matrix is not diagonal in the reference eigenbasis."""


class MismatchDetected(NumericError):
    """A substitution trial disagreed with the symbolic spectrum."""


class ToleranceExceeded(NumericError):
    pass
