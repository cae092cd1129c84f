"""Exception types shared by all modules."""


class LommelError(Exception):
    """Base class for library errors."""


class DomainError(LommelError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(DomainError):
    """A hypothesis required by a bound or representation does not hold.

    The message names the failing inequality.
    """


class PoleError(DomainError):
    """A gamma-function pole was hit."""


class InapplicableError(DomainError):
    """No admissible truncation exists for the requested parameters."""


class ConvergenceError(LommelError, ArithmeticError):
    """An iterative or adaptive numerical method did not converge."""


class InvariantViolation(LommelError, AssertionError):
    """A quantity that must lie in a known range was found outside it."""
