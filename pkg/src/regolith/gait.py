"""Per-wheel open-loop gait parameterization, presets, and search-space codecs.

A gait assigns each of the four wheel-legs (FL, FR, RL, RR) either a constant
drive spin (zero sweep amplitude) or a periodic sweep cycle: a sweep-out
stroke toward the rear at ``sweep_out_rate`` with ``spin_during_sweep_out``,
then a sweep-in recovery at ``sweep_in_rate`` with ``spin_during_sweep_in``.

Sign conventions (paddle convention, used consistently everywhere):

* positive ``sweep_rate`` / growing ``sweep_angle`` is the sweep-out stroke;
* positive wheel spin paddles material forward and thrusts the body
  backward, so a left-side wheel at +spin yields a counterclockwise yaw
  contribution and forward driving uses negative spins.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .errors import InvalidInputError, NotFoundError
from .space import SIGN, Dim, ParamSpace

from .validation import require_finite, require_in_range

WHEELS = ("FL", "FR", "RL", "RR")
LEFT_WHEELS = ("FL", "RL")
MAX_SWEEP_AMPLITUDE = math.radians(100.0)
MAX_SPIN_RATE = 12.0
GAIT_SCHEMA_VERSION = "gait.v1"

PRESET_NAMES = ("BO_RRP", "TRRP", "DS", "SINGLE_RRP", "BO_TRRP", "ML_INSPIRED")


@dataclass(frozen=True, slots=True)
class WheelGaitParams:
    drive_spin: float = 0.0
    sweep_amplitude: float = 0.0
    sweep_out_rate: float = 1.0
    sweep_in_rate: float = 1.0
    spin_during_sweep_out: float = 0.0
    spin_during_sweep_in: float = 0.0
    leg_extension: float = 0.5
    phase_offset: float = 0.0

    def validate(self) -> "WheelGaitParams":
        require_finite("drive_spin", self.drive_spin)
        require_in_range("sweep_amplitude", self.sweep_amplitude, 0.0, MAX_SWEEP_AMPLITUDE + 1e-12)
        require_finite("spin_during_sweep_out", self.spin_during_sweep_out)
        require_finite("spin_during_sweep_in", self.spin_during_sweep_in)
        require_in_range("leg_extension", self.leg_extension, 0.0, 1.0)
        if not (0.0 <= self.phase_offset < 1.0):
            raise InvalidInputError(f"phase_offset must be in [0, 1), got {self.phase_offset!r}")
        if self.sweep_amplitude > 0.0:
            if not self.sweep_out_rate > 0.0:
                raise InvalidInputError("sweep_out_rate must be > 0 for a sweeping wheel")
            if not self.sweep_in_rate > 0.0:
                raise InvalidInputError("sweep_in_rate must be > 0 for a sweeping wheel")
        require_finite("sweep_out_rate", self.sweep_out_rate)
        require_finite("sweep_in_rate", self.sweep_in_rate)
        return self

    @property
    def sweeps(self) -> bool:
        return self.sweep_amplitude > 0.0

    def cycle_period(self) -> float | None:
        """Sweep cycle period, or None for a non-sweeping wheel."""
        if not self.sweeps:
            return None
        return self.sweep_amplitude / self.sweep_out_rate + self.sweep_amplitude / self.sweep_in_rate


@dataclass(frozen=True)
class GaitParams:
    wheels: dict[str, WheelGaitParams]
    label: str = "custom"
    # Resolves the posture open point: when set, the differential part of the
    # leg extensions is scheduled with sin(yaw) by the slope simulator so the
    # body tracks the changing cross-slope as it turns.
    roll_posture_tracking: bool = False

    def validate(self) -> "GaitParams":
        if set(self.wheels) != set(WHEELS):
            raise InvalidInputError(f"gait must define exactly the wheels {WHEELS}")
        for w in WHEELS:
            self.wheels[w].validate()
        return self

    def wheel_period(self, wheel: str) -> float:
        """Cycle period of one wheel; non-sweeping wheels inherit the longest
        sweeping period so all phases stay synchronized (1 s if none sweep)."""
        own = self.wheels[wheel].cycle_period()
        if own is not None:
            return own
        periods = [p for w in WHEELS if (p := self.wheels[w].cycle_period()) is not None]
        return max(periods) if periods else 1.0

    def period(self) -> float:
        return max(self.wheel_period(w) for w in WHEELS)


@dataclass(frozen=True, slots=True)
class WheelCommand:
    spin_rate: float
    sweep_rate: float
    sweep_angle: float
    leg_extension: float
    # Pedaling wheel-legs (nonzero sweep amplitude) are lifted into the
    # material and churn it; only rolling wheels turn spin into drive thrust.
    drives: bool = True


@dataclass(frozen=True)
class ActuatorCommand:
    """12-channel actuation snapshot: spin, sweep, and leg extension per wheel."""

    wheels: dict[str, WheelCommand]


def commands_at(gait: GaitParams, t: float) -> ActuatorCommand:
    """Open-loop actuator command of every wheel at time ``t`` (s).

    Piecewise per wheel: sweep-out then sweep-in, shifted by the wheel's
    phase offset and repeated with its cycle period.  Zero-amplitude wheels
    emit their constant drive spin.
    """
    if not (math.isfinite(t) and t >= 0.0):
        raise InvalidInputError(f"t must be >= 0, got {t!r}")
    out: dict[str, WheelCommand] = {}
    for w in WHEELS:
        out[w] = _wheel_command(gait.wheels[w], t)
    return ActuatorCommand(wheels=out)


def _wheel_command(p: WheelGaitParams, t: float) -> WheelCommand:
    if not p.sweeps:
        return WheelCommand(
            spin_rate=p.drive_spin, sweep_rate=0.0, sweep_angle=0.0,
            leg_extension=p.leg_extension, drives=True,
        )
    period = p.cycle_period()
    t_out = p.sweep_amplitude / p.sweep_out_rate
    u = math.fmod(t / period + p.phase_offset, 1.0)
    tc = u * period  # time within the cycle
    if tc < t_out:
        angle = min(p.sweep_out_rate * tc, p.sweep_amplitude)
        return WheelCommand(
            spin_rate=p.spin_during_sweep_out, sweep_rate=p.sweep_out_rate,
            sweep_angle=angle, leg_extension=p.leg_extension, drives=False,
        )
    angle = p.sweep_amplitude - p.sweep_in_rate * (tc - t_out)
    return WheelCommand(
        spin_rate=p.spin_during_sweep_in, sweep_rate=-p.sweep_in_rate,
        sweep_angle=min(max(angle, 0.0), p.sweep_amplitude),
        leg_extension=p.leg_extension, drives=False,
    )


def _next_phase_boundary(p: WheelGaitParams, t: float) -> float:
    """First time strictly after ``t`` at which the wheel's command switches
    between sweep-out and sweep-in (inf for non-sweeping wheels).  The
    integrator splits its steps at these instants."""
    if not p.sweeps:
        return math.inf
    period = p.cycle_period()
    t_out = p.sweep_amplitude / p.sweep_out_rate
    tc = math.fmod(t / period + p.phase_offset, 1.0) * period
    if tc < t_out - 1e-12:
        return t + (t_out - tc)
    nxt = t + (period - tc)
    if nxt - t < 1e-12:
        nxt = t + t_out
    return nxt


def mirror(gait: GaitParams) -> GaitParams:
    """Swap left and right wheel parameters.

    Under the paddle convention a left/right swap is a full mirror: the
    swapped spin pattern produces the negated yaw trajectory, so no explicit
    sign flips are needed.  Involution: mirror(mirror(g)) == g.
    """
    w = gait.wheels
    return replace(
        gait,
        wheels={"FL": w["FR"], "FR": w["FL"], "RL": w["RR"], "RR": w["RL"]},
    )


# ---------------------------------------------------------------------------
# Search space
# ---------------------------------------------------------------------------

SWEEP_RATE_BOUNDS = (0.2, 8.0)
SPIN_DURING_BOUNDS = (-MAX_SPIN_RATE, MAX_SPIN_RATE)
MIN_SEARCHED_AMPLITUDE = 0.35  # rad; sub-20-degree strokes churn without pedaling


def default_space() -> ParamSpace:
    """The 22-dimensional gait search space.

    Searched: rear sweep amplitudes (2), rear sweep-out/in rates (4), drive
    spin magnitude and direction of all wheels (4 + 4 sign dims), rear spin
    rates during sweep-out and sweep-in (4), and all leg extensions (4).
    Front wheels never sweep and phase offsets stay at the preset values.
    """
    dims: list[Dim] = []
    for w in ("RL", "RR"):
        dims.append(Dim(f"{w}.sweep_amplitude", MIN_SEARCHED_AMPLITUDE, MAX_SWEEP_AMPLITUDE))
    for w in ("RL", "RR"):
        dims.append(Dim(f"{w}.sweep_out_rate", *SWEEP_RATE_BOUNDS))
        dims.append(Dim(f"{w}.sweep_in_rate", *SWEEP_RATE_BOUNDS))
    for w in WHEELS:
        dims.append(Dim(f"{w}.drive_spin_mag", 0.0, MAX_SPIN_RATE))
    for w in WHEELS:
        dims.append(Dim(f"{w}.drive_spin_dir", -1.0, 1.0, kind=SIGN))
    for w in ("RL", "RR"):
        dims.append(Dim(f"{w}.spin_during_sweep_out", *SPIN_DURING_BOUNDS))
    for w in ("RL", "RR"):
        dims.append(Dim(f"{w}.spin_during_sweep_in", *SPIN_DURING_BOUNDS))
    for w in WHEELS:
        dims.append(Dim(f"{w}.leg_extension", 0.0, 1.0))
    return ParamSpace(dims=tuple(dims))


def encode(gait: GaitParams, space: ParamSpace | None = None) -> np.ndarray:
    """Map a gait to the unit cube of ``space`` (default: the 22-dim space)."""
    space = space or default_space()
    gait.validate()
    values: dict[str, float] = {}
    for w in WHEELS:
        p = gait.wheels[w]
        values[f"{w}.sweep_amplitude"] = p.sweep_amplitude
        values[f"{w}.sweep_out_rate"] = p.sweep_out_rate
        values[f"{w}.sweep_in_rate"] = p.sweep_in_rate
        values[f"{w}.drive_spin_mag"] = abs(p.drive_spin)
        values[f"{w}.drive_spin_dir"] = 1.0 if p.drive_spin >= 0.0 else -1.0
        values[f"{w}.spin_during_sweep_out"] = p.spin_during_sweep_out
        values[f"{w}.spin_during_sweep_in"] = p.spin_during_sweep_in
        values[f"{w}.leg_extension"] = p.leg_extension
    needed = {name: values[name] for name in space.names()}
    return space.encode(needed)


def decode(vector: np.ndarray, space: ParamSpace | None = None, label: str = "custom") -> GaitParams:
    """Inverse of :func:`encode`.  Non-searched fields take neutral values
    (front wheels never sweep, phase offsets zero, posture tracking off)."""
    space = space or default_space()
    values = space.decode(vector)
    wheels: dict[str, WheelGaitParams] = {}
    for w in WHEELS:
        get = lambda key, default: values.get(f"{w}.{key}", default)
        mag = get("drive_spin_mag", 0.0)
        sign = get("drive_spin_dir", 1.0)
        wheels[w] = WheelGaitParams(
            drive_spin=mag * sign,
            sweep_amplitude=get("sweep_amplitude", 0.0),
            sweep_out_rate=get("sweep_out_rate", 1.0),
            sweep_in_rate=get("sweep_in_rate", 1.0),
            spin_during_sweep_out=get("spin_during_sweep_out", 0.0),
            spin_during_sweep_in=get("spin_during_sweep_in", 0.0),
            leg_extension=get("leg_extension", 0.5),
            phase_offset=0.0,
        )
    return GaitParams(wheels=wheels, label=label).validate()


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

_WHEEL_FIELDS = {
    "drive_spin_rad_s": "drive_spin",
    "sweep_amplitude_rad": "sweep_amplitude",
    "sweep_out_rate_rad_s": "sweep_out_rate",
    "sweep_in_rate_rad_s": "sweep_in_rate",
    "spin_during_sweep_out_rad_s": "spin_during_sweep_out",
    "spin_during_sweep_in_rad_s": "spin_during_sweep_in",
    "leg_extension_frac": "leg_extension",
    "phase_offset_frac": "phase_offset",
}


def gait_to_json(gait: GaitParams) -> dict:
    return {
        "schema_version": GAIT_SCHEMA_VERSION,
        "label": gait.label,
        "roll_posture_tracking": gait.roll_posture_tracking,
        "wheels": {
            w: {jname: getattr(gait.wheels[w], attr) for jname, attr in _WHEEL_FIELDS.items()}
            for w in WHEELS
        },
    }


def gait_from_json(doc: dict) -> GaitParams:
    version = doc.get("schema_version")
    if version != GAIT_SCHEMA_VERSION:
        raise InvalidInputError(f"unsupported gait schema version {version!r}")
    try:
        wheels = {
            w: WheelGaitParams(**{attr: float(doc["wheels"][w][jname])
                                  for jname, attr in _WHEEL_FIELDS.items()})
            for w in WHEELS
        }
    except KeyError as exc:
        raise InvalidInputError(f"gait document missing field: {exc}") from exc
    return GaitParams(
        wheels=wheels,
        label=str(doc.get("label", "custom")),
        roll_posture_tracking=bool(doc.get("roll_posture_tracking", False)),
    ).validate()


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

_PRESETS_CACHE: dict[str, GaitParams] | None = None


def _load_presets() -> dict[str, GaitParams]:
    global _PRESETS_CACHE
    if _PRESETS_CACHE is None:
        text = resources.files("regolith").joinpath("presets.json").read_text(encoding="utf-8")
        doc = json.loads(text)
        if doc.get("schema_version") != GAIT_SCHEMA_VERSION:
            raise InvalidInputError("presets.json schema version mismatch")
        _PRESETS_CACHE = {
            name: gait_from_json({"schema_version": GAIT_SCHEMA_VERSION, **body, "label": name})
            for name, body in doc["presets"].items()
        }
    return _PRESETS_CACHE


def preset(name: str) -> GaitParams:
    """Return a documented gait preset by name (see ``PRESET_NAMES``)."""
    presets = _load_presets()
    if name not in presets:
        raise NotFoundError(f"unknown gait preset {name!r}; available: {sorted(presets)}")
    return presets[name]


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_load_presets()))
