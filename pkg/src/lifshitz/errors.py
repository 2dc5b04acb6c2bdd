"""Exception hierarchy.

Every exception carries a stable machine-readable ``code`` so that callers
(and the CLI) can dispatch on failure kind without string matching.
"""


class LifshitzError(Exception):
    """Base class for all package errors."""

    code = "ERROR"


class DomainError(LifshitzError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "DOMAIN"


class MaterialParseError(LifshitzError):
    """A material file could not be parsed against the schema."""

    code = "PARSE"


class InvariantError(LifshitzError):
    """A constructed value violates a type invariant."""

    code = "INVARIANT"


class NoConvergenceError(LifshitzError):
    """A quadrature or sum failed to meet its tolerance.

    Carries the best partial value and its error estimate so callers can
    decide whether the partial result is still usable.
    """

    code = "NO_CONVERGENCE"

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class NoSignChangeError(LifshitzError):
    """A bracketing root finder was given endpoints of equal sign."""

    code = "NO_SIGN_CHANGE"


class NoRepulsionError(LifshitzError):
    """No repulsive (positive-energy) region exists in the given bracket."""

    code = "NO_REPULSION"


class AmbiguousError(LifshitzError):
    """More than one candidate feature was found where one was expected."""

    code = "AMBIGUOUS"
