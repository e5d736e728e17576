"""Exception types shared by the freqdyn modules."""


class FreqdynError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FreqdynError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ValidationError(FreqdynError, ValueError):
    """Structured input (parameters, partitions, families) is inconsistent."""


class EstimateOverflowError(FreqdynError, ArithmeticError):
    """A log-domain estimate left the range representable in double precision."""


class HorizonError(FreqdynError, IndexError):
    """A computation needs indices beyond the materialized horizon."""


class PreconditionError(FreqdynError, ValueError):
    """A mathematical hypothesis required by a construction is violated."""


class DivergingTailError(FreqdynError, RuntimeError):
    """A tail sum did not close below its target before the scan cap."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class TruncationError(FreqdynError, RuntimeError):
    """The discarded part of a truncated series is too large to certify."""


class ConfigError(FreqdynError, ValueError):
    """An experiment configuration or a parse spec could not be understood."""
