"""Small input-validation helpers used at public API boundaries."""

import math

from .errors import InvalidInputError


def require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


def require_positive(name: str, value: float) -> float:
    value = require_finite(name, value)
    if value <= 0.0:
        raise InvalidInputError(f"{name} must be > 0, got {value!r}")
    return value


def require_nonnegative(name: str, value: float) -> float:
    value = require_finite(name, value)
    if value < 0.0:
        raise InvalidInputError(f"{name} must be >= 0, got {value!r}")
    return value


def require_in_range(name: str, value: float, lo: float, hi: float) -> float:
    value = require_finite(name, value)
    if not (lo <= value <= hi):
        raise InvalidInputError(f"{name} must be in [{lo}, {hi}], got {value!r}")
    return value
