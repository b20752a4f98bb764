"""Phenomenological wheel-terrain model for a single wheel-leg in granular media.

The model captures the solid/fluid anisotropy of a sweeping, spinning wheel:

* a slow sweep with the spin halted piles material into a mound and reacts
  with a large, slowly saturating resistive torque (solid manipulation);
* a fast sweep with the wheel spinning shears the surrounding grains into a
  fluid-like state and reacts with a small, brief torque (fluid manipulation).

Three torque/force channels are modeled, all smooth and closed-form so every
property is checkable:

``resistive_torque``
    reaction to the sweep motion; scales with a fluidization factor that
    decays with spin rate, a saturating-exponential in swept angle, and the
    accumulated mound.
``spin_drag_torque``
    torque about the sweep axis produced by wheel spin alone (a spinning
    wheel churns grains even when the arm is not sweeping).  This is what the
    virtual single-wheel bench's force sensor picks up between and after
    sweeps; it is not applied to the rover body in the planar simulator.
``drive_thrust``
    propulsive force from wheel spin, saturating in spin rate.

All functions are pure and operate on value types; they are safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInputError
from .validation import require_finite, require_positive

DEFAULT_IMMERSION_M = 0.02


@dataclass(frozen=True, slots=True)
class TorqueModelParams:
    """Calibration constants of the wheel-terrain model.

    ``omega_ref`` is not a free choice: the default below is the root of the
    bench calibration equation (see :func:`calibrate_omega_ref`) that makes
    the solid:fluid peak-torque ratio of the two default bench protocols
    exactly 2.
    """

    tau_sat: float = 1.0          # peak saturated resistive torque, N*m
    phi_c: float = 0.32           # characteristic sweep angle, rad
    omega_ref: float = 9.17819746000218  # spin rate at half fluidization effect, rad/s
    f_min: float = 0.4            # fully fluidized torque fraction
    thrust_coeff: float = 1.15    # thrust per unit effective spin, N*s/rad
    slip_sat: float = 20.0        # spin rate at which thrust saturates, rad/s
    mound_gain: float = 1.2       # mound accumulation rate per swept rad
    mound_decay: float = 0.7      # mound agitation rate per spun rad
    spin_torque_coeff: float = 0.36  # spin-churn torque scale, N*m
    spin_torque_ref: float = 5.0     # spin rate scale of the churn torque, rad/s
    immersion_ref: float = DEFAULT_IMMERSION_M  # immersion at which tau_sat applies, m

    def validate(self) -> "TorqueModelParams":
        require_positive("tau_sat", self.tau_sat)
        require_positive("phi_c", self.phi_c)
        require_positive("omega_ref", self.omega_ref)
        require_positive("slip_sat", self.slip_sat)
        require_positive("spin_torque_ref", self.spin_torque_ref)
        require_positive("immersion_ref", self.immersion_ref)
        if not (0.0 < self.f_min < 1.0):
            raise InvalidInputError(f"f_min must be in (0, 1), got {self.f_min!r}")
        if self.thrust_coeff < 0.0:
            raise InvalidInputError("thrust_coeff must be >= 0")
        if self.spin_torque_coeff < 0.0:
            raise InvalidInputError("spin_torque_coeff must be >= 0")
        if self.mound_gain < 0.0 or self.mound_decay < 0.0:
            raise InvalidInputError("mound rates must be >= 0")
        return self


DEFAULT_TORQUE_PARAMS = TorqueModelParams()


@dataclass(frozen=True, slots=True)
class WheelTerrainState:
    """Local terrain state at one wheel.

    ``mound`` is the normalized amount of solidified material piled in front
    of the wheel; ``fluidization`` is the current factor in [f_min, 1] where
    1 means a fully solid response.  A fresh, air-fluidized bed has no mound
    and an unsheared (solid-responding) packing.
    """

    mound: float = 0.0
    fluidization: float = 1.0
    immersion: float = DEFAULT_IMMERSION_M

    @classmethod
    def fresh(cls, immersion: float = DEFAULT_IMMERSION_M) -> "WheelTerrainState":
        return cls(mound=0.0, fluidization=1.0, immersion=immersion)

    def validate(self, params: TorqueModelParams = DEFAULT_TORQUE_PARAMS) -> "WheelTerrainState":
        if not (0.0 <= self.mound <= 1.0):
            raise InvalidInputError(f"mound must be in [0, 1], got {self.mound!r}")
        if not (params.f_min <= self.fluidization <= 1.0):
            raise InvalidInputError(
                f"fluidization must be in [{params.f_min}, 1], got {self.fluidization!r}"
            )
        if not (math.isfinite(self.immersion) and self.immersion >= 0.0):
            raise InvalidInputError(f"immersion must be >= 0, got {self.immersion!r}")
        return self


@dataclass(frozen=True, slots=True)
class SweepSpinCommand:
    """Instantaneous actuation of one wheel-leg: signed sweep and spin rates
    plus the sweep angle accumulated since the start of the current stroke."""

    sweep_rate: float
    spin_rate: float
    sweep_angle: float = 0.0

    def validate(self) -> "SweepSpinCommand":
        require_finite("sweep_rate", self.sweep_rate)
        require_finite("spin_rate", self.spin_rate)
        require_finite("sweep_angle", self.sweep_angle)
        return self


# Unvalidated scalar kernels.  The public wrappers below validate inputs and
# delegate here; the planar simulator's integration loop calls these directly
# after validating its own inputs once per step.

def _fluid_factor(spin_rate: float, params: TorqueModelParams) -> float:
    q = spin_rate / params.omega_ref
    return params.f_min + (1.0 - params.f_min) / (1.0 + q * q)


def _mound_factor(mound: float) -> float:
    # Torque doubles between an empty bed and a fully developed mound.
    return 0.5 + 0.5 * mound


def _resistive_torque(sweep_rate: float, sweep_angle: float, spin_rate: float,
                      mound: float, immersion: float, params: TorqueModelParams) -> float:
    if sweep_rate == 0.0:
        return 0.0
    buildup = 1.0 - math.exp(-abs(sweep_angle) / params.phi_c)
    magnitude = (
        params.tau_sat * (immersion / params.immersion_ref)
        * _fluid_factor(spin_rate, params) * buildup * _mound_factor(mound)
    )
    return -math.copysign(magnitude, sweep_rate)


def _spin_drag_torque(spin_rate: float, mound: float, params: TorqueModelParams) -> float:
    if spin_rate == 0.0:
        return 0.0
    magnitude = (
        params.spin_torque_coeff * math.tanh(abs(spin_rate) / params.spin_torque_ref)
        * _mound_factor(mound)
    )
    return -math.copysign(magnitude, spin_rate)


def _drive_thrust(spin_rate: float, mound: float, params: TorqueModelParams) -> float:
    return (
        params.thrust_coeff * params.slip_sat
        * math.tanh(spin_rate / params.slip_sat) * _mound_factor(mound)
    )


def _mound_step(mound: float, sweep_rate: float, spin_rate: float,
                dt: float, params: TorqueModelParams) -> float:
    mound = mound + (params.mound_gain * abs(sweep_rate)
                     - params.mound_decay * abs(spin_rate)) * dt
    return min(1.0, max(0.0, mound))


def fluidization_factor(spin_rate: float, params: TorqueModelParams = DEFAULT_TORQUE_PARAMS) -> float:
    """Fraction of the solid-phase resistive torque that survives wheel spin.

    f(w) = f_min + (1 - f_min) / (1 + (|w| / omega_ref)^2)

    Even in ``spin_rate``, 1 at rest, strictly decreasing in |w| toward
    ``f_min`` as the spinning wheel fluidizes its surroundings.
    """
    require_finite("spin_rate", spin_rate)
    return _fluid_factor(spin_rate, params)


def resistive_torque(
    state: WheelTerrainState,
    cmd: SweepSpinCommand,
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
) -> float:
    """Granular reaction torque opposing the sweep, N*m.

    tau = -sign(sweep_rate) * tau_sat * (immersion/immersion_ref)
          * f(spin) * (1 - exp(-|sweep_angle|/phi_c)) * (0.5 + 0.5*mound)

    Zero when the arm is not sweeping (the spin channel is separate, see
    :func:`spin_drag_torque`); odd in the sweep direction; magnitude
    non-decreasing in swept angle for a frozen terrain state.
    """
    state.validate(params)
    cmd.validate()
    return _resistive_torque(
        cmd.sweep_rate, cmd.sweep_angle, cmd.spin_rate, state.mound, state.immersion, params
    )


def spin_drag_torque(
    spin_rate: float,
    state: WheelTerrainState,
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
) -> float:
    """Torque about the sweep axis from wheel spin alone, N*m.

    A spinning wheel churns grains and the bench force sensor reads a small,
    roughly constant torque even with the sweep arm at rest.  Saturating in
    spin rate; odd in the spin direction; zero at rest.
    """
    require_finite("spin_rate", spin_rate)
    state.validate(params)
    return _spin_drag_torque(spin_rate, state.mound, params)


def drive_thrust(
    spin_rate: float,
    state: WheelTerrainState,
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
) -> float:
    """Propulsive force from wheel spin, N.

    F = thrust_coeff * slip_sat * tanh(spin_rate / slip_sat) * (0.5 + 0.5*mound)

    Odd in spin rate and saturating for |spin| >> slip_sat.
    """
    require_finite("spin_rate", spin_rate)
    state.validate(params)
    return _drive_thrust(spin_rate, state.mound, params)


def mound_update(
    state: WheelTerrainState,
    cmd: SweepSpinCommand,
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    dt: float = 0.01,
) -> WheelTerrainState:
    """Advance the terrain state by ``dt``: sweeping accumulates mound,
    spinning agitates it away, and fluidization tracks the current spin."""
    state.validate(params)
    cmd.validate()
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidInputError(f"dt must be > 0, got {dt!r}")
    mound = _mound_step(state.mound, cmd.sweep_rate, cmd.spin_rate, dt, params)
    return replace(state, mound=mound, fluidization=_fluid_factor(cmd.spin_rate, params))


# ---------------------------------------------------------------------------
# Virtual single-wheel bench
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class BenchProtocol:
    """One bench run: constant spin, one sweep stroke of ``sweep_extent`` at
    constant ``sweep_rate``, then a settle window with the wheel still
    spinning while the arm holds position."""

    spin_rate: float
    sweep_rate: float
    sweep_extent: float
    settle_time: float = 0.25

    def validate(self) -> "BenchProtocol":
        require_finite("spin_rate", self.spin_rate)
        require_finite("sweep_rate", self.sweep_rate)
        require_finite("sweep_extent", self.sweep_extent)
        if self.sweep_extent < 0.0:
            raise InvalidInputError("sweep_extent must be >= 0")
        if self.sweep_extent > 0.0 and self.sweep_rate == 0.0:
            raise InvalidInputError("sweep_rate must be nonzero for a nonzero sweep_extent")
        if not (math.isfinite(self.settle_time) and self.settle_time >= 0.0):
            raise InvalidInputError("settle_time must be >= 0")
        return self


# Fig.-style default protocols: solid = slow sweep with the spin halted,
# fluid = fast sweep with the wheel spinning.  Both stroke 90 degrees.
SOLID_PROTOCOL = BenchProtocol(spin_rate=0.0, sweep_rate=1.0, sweep_extent=math.pi / 2)
FLUID_PROTOCOL = BenchProtocol(spin_rate=11.0, sweep_rate=6.0, sweep_extent=math.pi / 2)

BENCH_DT = 0.002


@dataclass(frozen=True)
class BenchProfile:
    """Time-stamped net torque trace recorded by the virtual bench."""

    t: np.ndarray
    torque: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def peak(self) -> float:
        """Largest |torque| in the profile (0 for an empty profile)."""
        if len(self.torque) == 0:
            return 0.0
        return float(np.max(np.abs(self.torque)))

    def duration_above(self, fraction: float = 0.1) -> float:
        """Total time the torque magnitude exceeds ``fraction`` of its own peak."""
        if len(self.torque) < 2:
            return 0.0
        dt = float(self.t[1] - self.t[0])
        threshold = fraction * self.peak()
        return float(np.count_nonzero(np.abs(self.torque) > threshold)) * dt

    def time_to_fraction_of_plateau(self, fraction: float = 0.95) -> float | None:
        """First time |torque| reaches ``fraction`` of the profile's final
        saturated level (the plateau, taken as the peak of the monotone
        solid-stroke profile)."""
        if len(self.torque) == 0:
            return None
        target = fraction * self.peak()
        idx = np.flatnonzero(np.abs(self.torque) >= target)
        if idx.size == 0:
            return None
        return float(self.t[idx[0]])

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.csv())

    def csv(self) -> str:
        lines = ["t_s,torque_Nm"]
        lines.extend(f"{t:.6f},{tau:.9f}" for t, tau in zip(self.t, self.torque))
        return "\n".join(lines) + "\n"


def single_wheel_bench(
    protocol: BenchProtocol,
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    dt: float = BENCH_DT,
) -> BenchProfile:
    """Run one bench protocol on a freshly fluidized bed and record the net
    torque (sweep reaction + spin churn) at every ``dt``.

    The trace covers the sweep stroke plus the settle window.  A zero-extent
    protocol records nothing (empty profile).  Deterministic.
    """
    protocol.validate()
    params.validate()
    require_positive("dt", dt)
    if protocol.sweep_extent == 0.0:
        return BenchProfile(t=np.empty(0), torque=np.empty(0))

    sweep_time = protocol.sweep_extent / abs(protocol.sweep_rate)
    total = sweep_time + protocol.settle_time
    n = int(math.floor(total / dt)) + 1
    t = np.arange(n) * dt
    torque = np.empty(n)

    state = WheelTerrainState.fresh()
    for k in range(n):
        tk = t[k]
        if tk <= sweep_time:
            angle = min(abs(protocol.sweep_rate) * tk, protocol.sweep_extent)
            cmd = SweepSpinCommand(
                sweep_rate=protocol.sweep_rate,
                spin_rate=protocol.spin_rate,
                sweep_angle=angle,
            )
        else:
            cmd = SweepSpinCommand(
                sweep_rate=0.0,
                spin_rate=protocol.spin_rate,
                sweep_angle=protocol.sweep_extent,
            )
        torque[k] = resistive_torque(state, cmd, params) + spin_drag_torque(
            cmd.spin_rate, state, params
        )
        state = mound_update(state, cmd, params, dt)
    return BenchProfile(t=t, torque=torque)


def bench_anisotropy(
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    solid: BenchProtocol = SOLID_PROTOCOL,
    fluid: BenchProtocol = FLUID_PROTOCOL,
    dt: float = BENCH_DT,
) -> dict:
    """Peak and 10%-of-peak duration ratios between the solid and fluid
    bench protocols, plus the underlying profiles."""
    profile_solid = single_wheel_bench(solid, params, dt)
    profile_fluid = single_wheel_bench(fluid, params, dt)
    return {
        "solid": profile_solid,
        "fluid": profile_fluid,
        "peak_ratio": profile_solid.peak() / profile_fluid.peak(),
        "duration_ratio": profile_solid.duration_above(0.1) / profile_fluid.duration_above(0.1),
    }


def calibrate_omega_ref(
    params: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    target_peak_ratio: float = 2.0,
    bracket: tuple[float, float] = (1.0, 100.0),
    dt: float = BENCH_DT,
) -> float:
    """Solve for the ``omega_ref`` that makes the solid:fluid bench
    peak-torque ratio equal ``target_peak_ratio`` (all other params fixed).

    The bench reports only ratios in the source experiments, so this is the
    one constant pinned by calibration rather than chosen freely.
    """
    from scipy.optimize import brentq

    def gap(omega_ref: float) -> float:
        trial = replace(params, omega_ref=omega_ref)
        result = bench_anisotropy(trial, dt=dt)
        return result["peak_ratio"] - target_peak_ratio

    return float(brentq(gap, bracket[0], bracket[1], xtol=1e-10))
