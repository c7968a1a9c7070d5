"""Exception hierarchy. Every analysis failure derives from ProxGrowthError."""
from typing import Any, Optional


class ProxGrowthError(Exception):
    """Base class for toolkit errors."""


class EvaluationDomainError(ProxGrowthError, ValueError):
    """A function produced a non-finite value (or was asked outside its ray)."""

    def __init__(self, message: str, x: Optional[float] = None):
        super().__init__(message)
        self.x = x


class CapabilityError(ProxGrowthError):
    """The source lacks a capability the operation needs (e.g. an exact derivative)."""


class IndexRangeError(ProxGrowthError, IndexError):
    """Index outside the admissible range of a sample."""


class SampleFormatError(ProxGrowthError, ValueError):
    """Malformed sample data (non-finite, non-monotone, wrong header)."""


class TrackTooShortError(ProxGrowthError, ValueError):
    """Not enough points for tail estimation."""


class PreconditionError(ProxGrowthError, ValueError):
    """An operation's precondition does not hold."""


class DomainError(ProxGrowthError, ValueError):
    """ln M is not positive on the requested grid."""


class SingularPointError(ProxGrowthError, ArithmeticError):
    """Division by a vanishing log-derivative."""

    def __init__(self, message: str, x: Optional[float] = None):
        super().__init__(message)
        self.x = x


class GridMismatchError(ProxGrowthError, ValueError):
    """Two sampled functions live on different grids."""


class SingularityError(ProxGrowthError, ArithmeticError):
    """Quadrature node hit a singularity even after the half-step offset."""

    def __init__(self, message: str, angle: Optional[float] = None):
        super().__init__(message)
        self.angle = angle


class UnboundedOnCircleError(ProxGrowthError, ArithmeticError):
    """The function is +inf somewhere on the circle."""


class InfiniteOrderError(ProxGrowthError):
    """A is not of finite order relative to M."""


class DegenerateGridError(ProxGrowthError, ValueError):
    """Too few grid points remain for the requested construction."""


class ModelValidationError(ProxGrowthError):
    """Candidate failed model growth validation; carries the report."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class SpecParseError(ProxGrowthError, ValueError):
    """Function spec could not be parsed; position is a 0-based column."""

    def __init__(self, message: str, spec: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}: {spec!r}")
        self.spec = spec
        self.position = position
