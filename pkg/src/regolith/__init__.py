"""Desk-scale laboratory for synthesizing, simulating, and optimizing turning
gaits of a four-wheel-leg rover on steep flowable granular slopes."""

__version__ = "0.1.0"

from .errors import (
    ConditioningError,
    EmptyModelError,
    GeometryError,
    InvalidInputError,
    NotFoundError,
    RangeError,
    RegolithError,
)

__all__ = [
    "__version__",
    "RegolithError",
    "InvalidInputError",
    "RangeError",
    "NotFoundError",
    "GeometryError",
    "EmptyModelError",
    "ConditioningError",
]
