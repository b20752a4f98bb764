"""Exception types shared across the package."""


class RegolithError(Exception):
    """Base class for all package errors."""


class InvalidInputError(RegolithError, ValueError):
    """An argument is non-finite, out of bounds, or otherwise malformed."""


class RangeError(InvalidInputError):
    """One or more named fields fall outside their allowed range."""

    def __init__(self, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.fields = fields or []


class NotFoundError(RegolithError, KeyError):
    """A named resource (preset, campaign, file) does not exist."""

    def __str__(self) -> str:  # KeyError would repr-quote the message
        return self.args[0] if self.args else ""


class GeometryError(RegolithError):
    """Degenerate geometry (e.g. collinear support contacts)."""


class EmptyModelError(RegolithError):
    """No usable observations to fit a model."""


class ConditioningError(RegolithError):
    """Kernel matrix not positive definite even after jitter escalation."""
