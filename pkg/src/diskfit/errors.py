"""Exception hierarchy shared by every diskfit module."""


class DiskFitError(Exception):
    """Base class for all library errors."""


class ContractError(DiskFitError, ValueError):
    """An argument violates the documented pre-conditions of an operation."""


class DomainError(DiskFitError, ValueError):
    """A numeric argument lies outside the mathematical domain of a function."""


class ConfigError(DiskFitError, ValueError):
    """A fit configuration is malformed or incomplete.

    ``path`` names the offending field (dotted/indexed), when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class UnknownTargetError(DiskFitError, KeyError):
    """Lookup of a built-in target function failed."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown target"


class SingularityError(DiskFitError, ArithmeticError):
    """A linear system is singular at working precision."""


class AdmissibilityError(DiskFitError, ValueError):
    """A function does not decay fast enough for the requested inner product."""


class EvaluationError(DiskFitError, ValueError):
    """An approximant was evaluated at a point where it is undefined."""
