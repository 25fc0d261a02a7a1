"""Error taxonomy shared across the package.

Plain ValueError covers malformed arguments/config.  The classes below mark
the other two failure families the command line distinguishes: resource
ceilings and numerical breakdowns.
"""


class ResourceError(RuntimeError):
    """Requested computation exceeds the configured memory/size budget."""


class NumericalError(RuntimeError):
    """A numerical routine produced an inconsistent or unusable result."""


class DomainError(ValueError):
    """Argument lies outside the domain of the function being evaluated."""


class ConvergenceError(NumericalError):
    """Iteration failed to converge; carries the last bracket examined."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
