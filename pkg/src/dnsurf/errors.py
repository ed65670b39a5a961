"""Exception hierarchy shared by all dnsurf modules."""


class DnsurfError(Exception):
    """Base class for all errors raised by this package."""


class NonInvertibleError(DnsurfError):
    """Division by a zero divisor (an element of the null cone)."""


class RootDomainError(DnsurfError):
    """nth root requested outside the positive cone."""


class DimensionError(DnsurfError):
    """Vector operands of mismatched dimension, or unsupported dimension."""


class ParseError(DnsurfError):
    """Expression syntax error. Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class OutOfDomainError(DnsurfError):
    """Evaluation point outside the declared parameter box."""


class GridError(DnsurfError):
    """Sampled-grid input too small or malformed."""


class SurfaceConditionError(DnsurfError):
    """A candidate surface violates the isothermal or time-like condition."""


class MetricDegeneracyError(DnsurfError):
    """The induced metric vanishes at the evaluation point."""


class DegeneratePointError(DnsurfError):
    """Operation requires a non-degenerate point or surface of general type."""


class ChartModelError(DnsurfError):
    """Two charts do not fit the affine uniqueness model."""


class QuadratureError(DnsurfError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class MotionError(DnsurfError):
    """Matrix is not a (possibly improper) Minkowski motion."""
