"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, GeometryError -> 3,
NumericalError -> 4.
"""


class NPRevolveError(Exception):
    """Base class for all package errors."""


class ConfigError(NPRevolveError):
    """Malformed or inconsistent run configuration."""


class GeometryError(NPRevolveError):
    """Invalid generating curve (touches the axis, self-intersects, ...)."""


class NumericalError(NPRevolveError):
    """A numerical routine failed (eigensolve, positive definiteness, ...)."""


class DomainError(NumericalError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularEvaluationError(NumericalError):
    """Point evaluation of a kernel requested on its singular diagonal."""
