"""Normalized parameter space searched by the optimizer.

Each dimension maps affinely to the unit interval.  ``sign`` dimensions
carry a direction choice: they decode to -1/+1 by thresholding at 0.5 and
encode back to 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, RangeError

CONTINUOUS = "continuous"
SIGN = "sign"


@dataclass(frozen=True, slots=True)
class Dim:
    name: str
    lower: float
    upper: float
    kind: str = CONTINUOUS

    def encode(self, value: float) -> float:
        if self.kind == SIGN:
            return 1.0 if value >= 0.0 else 0.0
        if not (self.lower <= value <= self.upper):
            raise RangeError(
                f"{self.name}={value!r} outside [{self.lower}, {self.upper}]",
                fields=[self.name],
            )
        return (value - self.lower) / (self.upper - self.lower)

    def decode(self, unit: float) -> float:
        if not (0.0 <= unit <= 1.0):
            raise RangeError(f"{self.name}: unit value {unit!r} outside [0, 1]", fields=[self.name])
        if self.kind == SIGN:
            return 1.0 if unit >= 0.5 else -1.0
        return self.lower + unit * (self.upper - self.lower)


@dataclass(frozen=True)
class ParamSpace:
    dims: tuple[Dim, ...] = field(default_factory=tuple)

    def __post_init__(self):
        names = [d.name for d in self.dims]
        if len(set(names)) != len(names):
            raise InvalidInputError("dimension names must be unique")
        for d in self.dims:
            if d.kind not in (CONTINUOUS, SIGN):
                raise InvalidInputError(f"unknown dim kind {d.kind!r}")
            if d.kind == CONTINUOUS and not d.lower < d.upper:
                raise InvalidInputError(f"{d.name}: lower must be < upper")

    @property
    def d(self) -> int:
        return len(self.dims)

    def names(self) -> list[str]:
        return [d.name for d in self.dims]

    def encode(self, values: dict[str, float]) -> np.ndarray:
        bad = []
        out = np.empty(self.d)
        for i, dim in enumerate(self.dims):
            try:
                out[i] = dim.encode(values[dim.name])
            except RangeError:
                bad.append(dim.name)
        if bad:
            raise RangeError(f"values out of bounds for: {', '.join(bad)}", fields=bad)
        return out

    def decode(self, vector: np.ndarray) -> dict[str, float]:
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (self.d,):
            raise InvalidInputError(f"expected vector of length {self.d}, got shape {vector.shape}")
        bad = [dim.name for dim, u in zip(self.dims, vector) if not (0.0 <= u <= 1.0)]
        if bad:
            raise RangeError(f"unit values out of [0, 1] for: {', '.join(bad)}", fields=bad)
        return {dim.name: dim.decode(u) for dim, u in zip(self.dims, vector)}

    def clamp_unit(self, vector: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(vector, dtype=float), 0.0, 1.0)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.random(self.d)
