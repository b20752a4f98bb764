"""Quasi-static planar simulation of the rover on a tilted granular plane.

Frames and conventions
----------------------
Slope-plane world frame: +y points uphill, +x across the slope, so the
downhill direction is (0, -1).  Yaw is measured counterclockwise from +y
(yaw 0 = facing uphill); the body-forward unit vector is (-sin yaw, cos yaw)
and body-left is (-cos yaw, -sin yaw).  Roll is positive when the left side
digs down; at yaw +90 deg the left side faces downhill, so an uncompensated
body on a slope rolls to ``slope_angle * sin(yaw)``.

Dynamics are overdamped and first order: granular locomotion at these speeds
is resistance dominated, so net wheel forces map to velocities through
damping constants rather than accelerating a mass.  Gravity enters as a
constant downhill pull resisted by its own (large) plowing drag, and as the
projection used by the support-polygon stability check.

Per-wheel engagement: when the body rolls, wheels on the lifted side lose
contact pressure with their mound and their thrust and sweep reaction fade
(down to ``engagement_floor``); wheels on the dug-in side stay fully
engaged.  This is what saturates the optimized gaits as the body turns
across the slope, and what the posture-tracking leg extensions counteract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import GeometryError, InvalidInputError
from .gait import (
    WHEELS,
    ActuatorCommand,
    GaitParams,
    WheelCommand,
    _next_phase_boundary,
    _wheel_command,
)
from .terradynamics import (
    DEFAULT_TORQUE_PARAMS,
    TorqueModelParams,
    WheelTerrainState,
    _drive_thrust,
    _fluid_factor,
    _mound_step,
    _resistive_torque,
)
from .validation import require_in_range, require_positive

_SIDE = {"FL": 1.0, "FR": -1.0, "RL": 1.0, "RR": -1.0}
_WHEEL_SIDES = tuple(_SIDE[w] for w in WHEELS)


@dataclass(frozen=True, slots=True)
class SlopeConfig:
    slope_angle: float = math.radians(25.0)
    gravity: float = 9.81
    downhill_drag_coeff: float = 8000.0   # resists the gravity pull, N*s/m
    translational_damping: float = 150.0  # resists wheel-driven motion, N*s/m
    rotational_damping: float = 8.0       # N*m*s/rad

    def validate(self) -> "SlopeConfig":
        require_in_range("slope_angle", self.slope_angle, 0.0, math.radians(45.0))
        require_positive("gravity", self.gravity)
        require_positive("downhill_drag_coeff", self.downhill_drag_coeff)
        require_positive("translational_damping", self.translational_damping)
        require_positive("rotational_damping", self.rotational_damping)
        return self


FLAT_SLOPE = SlopeConfig(slope_angle=0.0)


@dataclass(frozen=True, slots=True)
class BodyParams:
    """Posture and engagement constants of the rover body model."""

    engagement_gain: float = 1.8      # engagement loss per rad of adverse roll
    engagement_floor: float = 0.05
    leg_roll_gain: float = 0.545      # rad of roll per unit left/right extension difference
    roll_tau: float = 0.5             # s, first-order roll relaxation time
    com_raise: float = 0.3            # CoM height gain per unit mean extension
    leg_splay: float = 0.08           # m of contact widening per unit extension
    posture_ref_slope: float = math.radians(25.0)  # tilt at which tracking saturates


DEFAULT_BODY_PARAMS = BodyParams()


@dataclass(frozen=True)
class RoverState:
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0
    roll: float = 0.0
    wheel_states: dict[str, WheelTerrainState] = field(
        default_factory=lambda: {w: WheelTerrainState.fresh() for w in WHEELS}
    )
    leg_extensions: dict[str, float] = field(
        default_factory=lambda: {w: 0.5 for w in WHEELS}
    )
    mass: float = 2.5
    half_track: float = 0.12
    half_base: float = 0.15
    com_height: float = 0.08

    def validate(self) -> "RoverState":
        for name in ("x", "y", "yaw", "roll"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        require_positive("mass", self.mass)
        require_positive("half_track", self.half_track)
        require_positive("half_base", self.half_base)
        require_positive("com_height", self.com_height)
        if set(self.wheel_states) != set(WHEELS) or set(self.leg_extensions) != set(WHEELS):
            raise InvalidInputError("wheel_states and leg_extensions must cover exactly FL/FR/RL/RR")
        for w in WHEELS:
            self.wheel_states[w].validate()
            require_in_range(f"leg_extensions[{w}]", self.leg_extensions[w], 0.0, 1.0)
        return self


class Outcome(str, Enum):
    COMPLETED = "Completed"
    FAILED_TIP_OVER = "FailedTipOver"
    FAILED_SLIDE = "FailedSlide"


@dataclass(frozen=True, slots=True)
class EpisodeConfig:
    duration: float = 120.0
    dt: float = 0.01
    target_yaw: float = math.pi / 2
    failure_slide_limit: float = 0.8
    rng_seed: int = 0
    stop_at_target: bool = False     # default: keep turning past the target
    sample_interval: float = 0.1

    def validate(self) -> "EpisodeConfig":
        require_positive("duration", self.duration)
        if not (0.0 < self.dt <= 0.05):
            raise InvalidInputError(f"dt must be in (0, 0.05], got {self.dt!r}")
        require_positive("failure_slide_limit", self.failure_slide_limit)
        require_positive("sample_interval", self.sample_interval)
        return self


@dataclass(frozen=True, slots=True)
class TrajectorySample:
    t: float
    x: float
    y: float
    yaw: float
    roll: float


@dataclass(frozen=True)
class EpisodeResult:
    samples: list[TrajectorySample]
    outcome: Outcome
    final_yaw: float
    time_to_target: float | None
    downhill_drift: float


# ---------------------------------------------------------------------------
# Core physics
# ---------------------------------------------------------------------------

def _engagement(side: float, roll: float, body: BodyParams) -> float:
    e = 1.0 + side * body.engagement_gain * roll
    if e > 1.0:
        return 1.0
    if e < body.engagement_floor:
        return body.engagement_floor
    return e


def _physics_step(
    x: float, y: float, yaw: float, roll: float,
    mounds: list[float],
    cmds: tuple[WheelCommand, ...],
    immersions: tuple[float, ...],
    mass: float, half_track: float,
    slope: SlopeConfig, terra: TorqueModelParams, body: BodyParams, dt: float,
):
    """One overdamped Euler step on plain floats; shared by ``step`` and the
    episode loop.  Returns the new pose, roll, and mound levels."""
    force_bx = 0.0
    torque = 0.0
    for i in range(4):
        side = _WHEEL_SIDES[i]
        c = cmds[i]
        e = _engagement(side, roll, body)
        if c.drives:
            thrust = _drive_thrust(c.spin_rate, mounds[i], terra) * e
            # Paddle convention: positive spin thrusts along -x_body.
            force_bx -= thrust
            torque += side * half_track * thrust
        torque += side * e * _resistive_torque(
            c.sweep_rate, c.sweep_angle, c.spin_rate, mounds[i], immersions[i], terra
        )
        mounds[i] = _mound_step(mounds[i], c.sweep_rate, c.spin_rate, dt, terra)

    fwd_x = -math.sin(yaw)
    fwd_y = math.cos(yaw)
    inv_ct = 1.0 / slope.translational_damping
    vx = force_bx * fwd_x * inv_ct
    vy = force_bx * fwd_y * inv_ct
    if slope.slope_angle > 0.0:
        vy -= mass * slope.gravity * math.sin(slope.slope_angle) / slope.downhill_drag_coeff

    ext_diff = 0.5 * (
        cmds[0].leg_extension + cmds[2].leg_extension
        - cmds[1].leg_extension - cmds[3].leg_extension
    )
    roll_eq = slope.slope_angle * math.sin(yaw) - body.leg_roll_gain * ext_diff
    new_roll = roll_eq + (roll - roll_eq) * math.exp(-dt / body.roll_tau)

    return (
        x + vx * dt,
        y + vy * dt,
        yaw + (torque / slope.rotational_damping) * dt,
        new_roll,
    )


def step(
    state: RoverState,
    cmd: ActuatorCommand,
    slope: SlopeConfig,
    dt: float,
    terra: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    body: BodyParams = DEFAULT_BODY_PARAMS,
) -> RoverState:
    """Advance the rover one time step under a fixed actuator command."""
    state.validate()
    slope.validate()
    if not (0.0 < dt <= 0.05):
        raise InvalidInputError(f"dt must be in (0, 0.05], got {dt!r}")
    cmds = tuple(cmd.wheels[w] for w in WHEELS)
    mounds = [state.wheel_states[w].mound for w in WHEELS]
    immersions = tuple(state.wheel_states[w].immersion for w in WHEELS)
    x, y, yaw, roll = _physics_step(
        state.x, state.y, state.yaw, state.roll, mounds, cmds, immersions,
        state.mass, state.half_track, slope, terra, body, dt,
    )
    wheel_states = {
        w: replace(
            state.wheel_states[w],
            mound=mounds[i],
            fluidization=_fluid_factor(cmds[i].spin_rate, terra),
        )
        for i, w in enumerate(WHEELS)
    }
    return replace(
        state, x=x, y=y, yaw=yaw, roll=roll,
        wheel_states=wheel_states,
        leg_extensions={w: cmds[i].leg_extension for i, w in enumerate(WHEELS)},
    )


# ---------------------------------------------------------------------------
# Stability
# ---------------------------------------------------------------------------

def _stable(
    yaw: float, roll: float,
    ext_fl: float, ext_fr: float, ext_rl: float, ext_rr: float,
    half_track: float, half_base: float, com_height: float,
    slope: SlopeConfig, body: BodyParams,
    check_degenerate: bool = False,
) -> bool:
    # Contact quadrilateral FL -> FR -> RR -> RL in the body frame; extended
    # legs splay their contact outward on their own side.
    splay = body.leg_splay
    pts = (
        (half_base, half_track + splay * ext_fl),
        (half_base, -(half_track + splay * ext_fr)),
        (-half_base, -(half_track + splay * ext_rr)),
        (-half_base, half_track + splay * ext_rl),
    )
    if check_degenerate:
        area2 = 0.0
        for i in range(4):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % 4]
            area2 += x0 * y1 - x1 * y0
        if abs(area2) < 1e-12:
            raise GeometryError("support polygon is degenerate (collinear contacts)")
    # Gravity projection of the (extension-raised) CoM onto the contact plane.
    mean_ext = 0.25 * (ext_fl + ext_fr + ext_rl + ext_rr)
    height = com_height * (1.0 + body.com_raise * mean_ext)
    tan_slope = math.tan(slope.slope_angle)
    px = height * tan_slope * (-math.cos(yaw))
    py = height * (tan_slope * math.sin(yaw) + math.tan(roll))
    sign = None
    for i in range(4):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % 4]
        cross = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        if cross == 0.0:
            continue
        if sign is None:
            sign = cross > 0.0
        elif (cross > 0.0) != sign:
            return False
    return True


def support_polygon_check(
    state: RoverState,
    slope: SlopeConfig,
    body: BodyParams = DEFAULT_BODY_PARAMS,
) -> bool:
    """True iff the gravity projection of the CoM falls inside the
    quadrilateral of wheel contact points.

    Leg extensions widen the contact footprint on their side and raise the
    CoM; body roll and the slope tilt shift the projection toward the
    dug-in / downhill side.
    """
    state.validate()
    slope.validate()
    ext = state.leg_extensions
    return _stable(
        state.yaw, state.roll, ext["FL"], ext["FR"], ext["RL"], ext["RR"],
        state.half_track, state.half_base, state.com_height,
        slope, body, check_degenerate=True,
    )


# ---------------------------------------------------------------------------
# Episodes
# ---------------------------------------------------------------------------

def _scheduled_extension(base: float, tilt_fraction: float) -> float:
    ext = 0.5 + (base - 0.5) * tilt_fraction
    return min(1.0, max(0.0, ext))


def run_episode(
    gait: GaitParams,
    slope: SlopeConfig = SlopeConfig(),
    cfg: EpisodeConfig = EpisodeConfig(),
    terra: TorqueModelParams = DEFAULT_TORQUE_PARAMS,
    body: BodyParams = DEFAULT_BODY_PARAMS,
    initial_state: RoverState | None = None,
) -> EpisodeResult:
    """Integrate one open-loop episode from yaw 0 on a fresh bed.

    Ends at ``cfg.duration``, at the first target crossing when
    ``cfg.stop_at_target`` is set, or on failure (tip-over or sliding more
    than ``cfg.failure_slide_limit`` downhill).  Identical configurations
    produce bit-identical results.
    """
    gait.validate()
    slope.validate()
    cfg.validate()
    terra.validate()
    state0 = (initial_state or RoverState()).validate()

    wheel_params = tuple(gait.wheels[w] for w in WHEELS)
    base_ext = tuple(p.leg_extension for p in wheel_params)
    tracking = gait.roll_posture_tracking
    tilt_scale = slope.slope_angle / body.posture_ref_slope if body.posture_ref_slope > 0 else 0.0

    x, y, yaw, roll = state0.x, state0.y, state0.yaw, state0.roll
    mounds = [state0.wheel_states[w].mound for w in WHEELS]
    immersions = tuple(state0.wheel_states[w].immersion for w in WHEELS)
    exts = [state0.leg_extensions[w] for w in WHEELS]
    y0 = y

    n_steps = max(1, int(round(cfg.duration / cfg.dt)))
    stride = max(1, int(round(cfg.sample_interval / cfg.dt)))

    samples = [TrajectorySample(0.0, x, y, yaw, roll)]
    outcome = Outcome.COMPLETED
    time_to_target: float | None = None
    max_drift = 0.0
    target = cfg.target_yaw
    dt = cfg.dt

    for k in range(n_steps):
        t_step_end = (k + 1) * dt
        prev_yaw = yaw
        # Sub-step exactly at gait phase boundaries so the piecewise command
        # timing does not leave an O(dt) integration bias.
        t_cur = k * dt
        while t_cur < t_step_end - 1e-12:
            t_next = t_step_end
            for i in range(4):
                b = _next_phase_boundary(wheel_params[i], t_cur)
                if b < t_next - 1e-12:
                    t_next = b
            t_mid = 0.5 * (t_cur + t_next)
            if tracking:
                tilt = math.sin(yaw) * tilt_scale
                tilt = min(1.0, max(-1.0, tilt))
                cmds = tuple(
                    replace(
                        _wheel_command(wheel_params[i], t_mid),
                        leg_extension=_scheduled_extension(base_ext[i], tilt),
                    )
                    for i in range(4)
                )
            else:
                cmds = tuple(_wheel_command(wheel_params[i], t_mid) for i in range(4))
            x, y, yaw, roll = _physics_step(
                x, y, yaw, roll, mounds, cmds, immersions,
                state0.mass, state0.half_track, slope, terra, body, t_next - t_cur,
            )
            t_cur = t_next
        for i in range(4):
            exts[i] = cmds[i].leg_extension
        t_now = t_step_end

        if time_to_target is None:
            if (prev_yaw < target <= yaw) or (prev_yaw > target >= yaw):
                time_to_target = t_now - dt + dt * (target - prev_yaw) / (yaw - prev_yaw)
            elif yaw == target:
                time_to_target = t_now

        drift = y0 - y
        if drift > max_drift:
            max_drift = drift

        failed = False
        if drift > cfg.failure_slide_limit:
            outcome = Outcome.FAILED_SLIDE
            failed = True
        elif not _stable(
            yaw, roll, exts[0], exts[1], exts[2], exts[3],
            state0.half_track, state0.half_base, state0.com_height, slope, body,
        ):
            outcome = Outcome.FAILED_TIP_OVER
            failed = True

        if (k + 1) % stride == 0 or failed or k == n_steps - 1:
            samples.append(TrajectorySample(t_now, x, y, yaw, roll))
        if failed or (cfg.stop_at_target and time_to_target is not None):
            break

    return EpisodeResult(
        samples=samples,
        outcome=outcome,
        final_yaw=yaw,
        time_to_target=time_to_target,
        downhill_drift=max(0.0, max_drift),
    )


def time_to_yaw(result: EpisodeResult, target: float) -> float | None:
    """First crossing time of ``target`` yaw, linearly interpolated between
    recorded samples; None if the trajectory never crosses it."""
    prev = result.samples[0]
    if prev.yaw == target:
        return prev.t
    for s in result.samples[1:]:
        if (prev.yaw < target <= s.yaw) or (prev.yaw > target >= s.yaw):
            return prev.t + (s.t - prev.t) * (target - prev.yaw) / (s.yaw - prev.yaw)
        prev = s
    return None


def mean_yaw_rate(result: EpisodeResult, t_start: float, t_end: float) -> float:
    """Average signed yaw rate between two times, from the recorded samples."""
    if t_end <= t_start:
        raise InvalidInputError("t_end must be > t_start")
    yaw_start = _yaw_at(result, t_start)
    yaw_end = _yaw_at(result, t_end)
    return (yaw_end - yaw_start) / (t_end - t_start)


def _yaw_at(result: EpisodeResult, t: float) -> float:
    samples = result.samples
    if t <= samples[0].t:
        return samples[0].yaw
    for i in range(1, len(samples)):
        if samples[i].t >= t:
            a, b = samples[i - 1], samples[i]
            if b.t == a.t:
                return b.yaw
            return a.yaw + (b.yaw - a.yaw) * (t - a.t) / (b.t - a.t)
    return samples[-1].yaw
