"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by qkmetric."""


class EvaluationError(GeometryError, ArithmeticError):
    """A field produced a non-finite value inside a derivative stencil."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DomainError(GeometryError, ValueError):
    """A point lies outside the domain on which an object is defined."""


class OutsideConeError(DomainError):
    """The conical Kähler potential f = z^T N conj(z) is not positive."""


class ModelViolationError(DomainError):
    """A definiteness or signature condition of the special geometry fails."""


class AssemblyError(GeometryError):
    """An assembled metric is not positive definite where it must be."""


class SingularityError(GeometryError, ValueError):
    """A matrix that must be inverted is (numerically) singular."""


class PreconditionError(GeometryError, ValueError):
    """A documented precondition of an operation is violated."""


class ConfigError(GeometryError, ValueError):
    """Scenario configuration could not be parsed or validated."""
