"""Exception types shared across the package."""

__all__ = [
    "BlowUpReached",
    "DomainError",
    "EmptyRegion",
    "HypothesisViolated",
    "OutOfRange",
    "SamplingExhausted",
]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class BlowUpReached(ArithmeticError):
    """A closed-form solution was requested at or past its blow-up time."""


class OutOfRange(ValueError):
    """A query time lies outside the interval covered by a trajectory."""


class SamplingExhausted(RuntimeError):
    """The rejection sampler hit its retry budget; the target region is
    empty or too thin for the configured box and band."""


class EmptyRegion(ValueError):
    """No grid point of a scan fell inside the requested region."""


class HypothesisViolated(ValueError):
    """A trajectory's initial state fails the hypothesis of the estimate
    being checked."""
