"""Exception types shared across the package."""


class FracwosError(Exception):
    """Base class for all package errors."""


class DomainError(FracwosError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a non-removable singularity."""


class UnsupportedParameterError(FracwosError, ValueError):
    """A parameter combination the implementation deliberately does not cover."""


class ConfigError(FracwosError, ValueError):
    """Invalid run configuration. ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class EstimationFailure(FracwosError, RuntimeError):
    """The Monte Carlo estimator produced no usable samples."""
