"""Exception hierarchy.

All errors derive from :class:`MatPerspError` (itself a ``ValueError``), so
callers that only care about "bad input" can catch one class.
"""


class MatPerspError(ValueError):
    pass


class DomainError(MatPerspError):
    """A spectrum, ratio or scalar falls outside a function's domain."""


class PreconditionError(MatPerspError):
    """An inequality's hypothesis is not met (e.g. A*A + B*B != I)."""


class ParameterError(MatPerspError):
    """A functional or catalog parameter is out of range."""


class NonPositiveH(DomainError):
    """The denominator function h is not strictly positive on the spectrum."""


class ConvergenceError(MatPerspError, ArithmeticError):
    """The Jacobi eigensolver hit its sweep cap."""


class ConfigError(MatPerspError):
    """Unknown suite/function identifiers or invalid run parameters."""
