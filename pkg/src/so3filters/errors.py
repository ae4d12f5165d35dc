"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class SingularityError(ValueError):
    """A rotation lies on (or too close to) the set of half-turn rotations."""


class InvalidGainError(ValueError):
    """A weighting matrix does not induce a positive definite gain."""


class DegenerateObservationError(ValueError):
    """Vector measurements are (nearly) collinear."""


class DomainError(ValueError):
    """Parameters fall outside the region where a bound is valid."""


class AxisUndefinedError(ValueError):
    """The rotation axis is undefined (angle close to 0 or to pi)."""


class ConfigError(ValueError):
    """Malformed experiment configuration."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
