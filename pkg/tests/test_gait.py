import json
import math

import numpy as np
import pytest

from regolith.errors import InvalidInputError, NotFoundError, RangeError
from regolith.gait import (
    MAX_SWEEP_AMPLITUDE,
    WHEELS,
    GaitParams,
    WheelGaitParams,
    commands_at,
    decode,
    default_space,
    encode,
    gait_from_json,
    gait_to_json,
    mirror,
    preset,
    preset_names,
)
from regolith.space import CONTINUOUS, Dim, ParamSpace


def random_gait(rng) -> GaitParams:
    return decode(rng.random(22), default_space())


# -- presets --------------------------------------------------------------------

def test_preset_names_complete():
    assert set(preset_names()) == {
        "BO_RRP", "TRRP", "DS", "SINGLE_RRP", "BO_TRRP", "ML_INSPIRED",
    }


def test_unknown_preset_raises():
    with pytest.raises(NotFoundError):
        preset("WALTZ")


def test_trrp_right_rear_spin_disabled_during_sweep_out():
    g = preset("TRRP")
    assert g.wheels["RR"].spin_during_sweep_out == 0.0
    assert g.wheels["RL"].spin_during_sweep_out != 0.0


def test_trrp_rears_sweep_out_together_from_start():
    cmd = commands_at(preset("TRRP"), 0.01)
    assert cmd.wheels["RL"].sweep_rate > 0.0
    assert cmd.wheels["RR"].sweep_rate > 0.0
    assert cmd.wheels["RR"].spin_rate == 0.0


def test_bo_rrp_rears_alternate():
    g = preset("BO_RRP")
    assert abs(g.wheels["RL"].phase_offset - g.wheels["RR"].phase_offset) == pytest.approx(0.5)
    cmd = commands_at(g, 0.01)
    # one rear sweeps out while the other sweeps in
    assert cmd.wheels["RL"].sweep_rate * cmd.wheels["RR"].sweep_rate < 0.0


def test_rear_sweep_amplitude_is_100_degrees():
    for name in ("BO_RRP", "TRRP"):
        g = preset(name)
        for w in ("RL", "RR"):
            assert g.wheels[w].sweep_amplitude == pytest.approx(math.radians(100.0))


def test_ds_sides_spin_opposite():
    g = preset("DS")
    assert g.wheels["FL"].drive_spin * g.wheels["FR"].drive_spin < 0.0
    assert g.wheels["RL"].drive_spin * g.wheels["RR"].drive_spin < 0.0


def test_single_rrp_only_right_rear_sweeps_with_spin():
    g = preset("SINGLE_RRP")
    assert g.wheels["RR"].sweep_amplitude > 0.0
    assert g.wheels["RR"].spin_during_sweep_out != 0.0
    for w in ("FL", "FR", "RL"):
        assert g.wheels[w].sweep_amplitude == 0.0


def test_bo_trrp_combines_ds_and_single_rrp():
    g = preset("BO_TRRP")
    assert g.wheels["FL"].drive_spin > 0.0 > g.wheels["FR"].drive_spin
    assert g.wheels["RL"].drive_spin > 0.0
    assert g.wheels["RR"].sweep_amplitude > 0.0


def test_ml_inspired_refines_the_pedaling():
    ml, trrp, bo = preset("ML_INSPIRED"), preset("TRRP"), preset("BO_TRRP")
    # spinning halted and stroke slowed during sweep-out (solid manipulation)
    assert ml.wheels["RR"].spin_during_sweep_out == 0.0
    assert ml.wheels["RR"].sweep_out_rate < bo.wheels["RR"].sweep_out_rate
    # recovery accelerated and spun harder (fluid manipulation)
    assert ml.wheels["RR"].spin_during_sweep_in > trrp.wheels["RR"].spin_during_sweep_in
    assert ml.wheels["RR"].sweep_in_rate > trrp.wheels["RR"].sweep_in_rate
    # boosted differential spinning
    assert abs(ml.wheels["FL"].drive_spin) > abs(bo.wheels["FL"].drive_spin)
    # downhill-side (left, for a CCW turn) legs extended, uphill retracted
    assert ml.wheels["FL"].leg_extension > 0.5 > ml.wheels["FR"].leg_extension
    assert ml.roll_posture_tracking


# -- trajectories ----------------------------------------------------------------

def test_commands_rejects_negative_time():
    with pytest.raises(InvalidInputError):
        commands_at(preset("TRRP"), -0.1)


def test_zero_amplitude_wheels_emit_constant_drive():
    g = preset("DS")
    for t in (0.0, 0.37, 5.0):
        cmd = commands_at(g, t)
        for w in WHEELS:
            assert cmd.wheels[w].spin_rate == g.wheels[w].drive_spin
            assert cmd.wheels[w].sweep_rate == 0.0
            assert cmd.wheels[w].drives


def test_periodicity_on_random_gaits(rng):
    for _ in range(100):
        g = random_gait(rng)
        times = rng.uniform(0.0, 50.0, size=100)
        for w in WHEELS:
            period = g.wheel_period(w)
            for t in times:
                a = commands_at(g, t).wheels[w]
                b = commands_at(g, t + period).wheels[w]
                assert a.spin_rate == pytest.approx(b.spin_rate, abs=1e-9)
                assert a.sweep_rate == pytest.approx(b.sweep_rate, abs=1e-9)
                assert a.sweep_angle == pytest.approx(b.sweep_angle, abs=1e-7)


def test_sweep_angle_continuous_for_presets():
    dt = 1e-3
    for name in preset_names():
        g = preset(name)
        for w in WHEELS:
            p = g.wheels[w]
            rate_bound = max(p.sweep_out_rate, p.sweep_in_rate) * dt + 1e-9
            prev = commands_at(g, 0.0).wheels[w].sweep_angle
            for k in range(1, 4000):
                cur = commands_at(g, k * dt).wheels[w].sweep_angle
                assert abs(cur - prev) <= rate_bound
                prev = cur


def test_sweep_angle_stays_in_range(rng):
    for _ in range(20):
        g = random_gait(rng)
        for t in rng.uniform(0.0, 30.0, size=200):
            cmd = commands_at(g, t)
            for w in WHEELS:
                assert -1e-12 <= cmd.wheels[w].sweep_angle <= g.wheels[w].sweep_amplitude + 1e-12


def test_nonsweeping_wheels_inherit_longest_period():
    g = preset("BO_TRRP")
    rr_period = g.wheels["RR"].cycle_period()
    assert g.wheel_period("FL") == rr_period
    assert g.period() == rr_period


# -- mirror ------------------------------------------------------------------------

def test_mirror_swaps_sides():
    g = preset("DS")
    m = mirror(g)
    assert m.wheels["FL"] == g.wheels["FR"]
    assert m.wheels["RR"] == g.wheels["RL"]
    # per-side spin signs flip relative to the original assignment
    assert m.wheels["FL"].drive_spin == -g.wheels["FL"].drive_spin


def test_mirror_is_involution():
    for name in preset_names():
        g = preset(name)
        assert mirror(mirror(g)) == g


def test_mirror_fixed_point_for_symmetric_gait():
    w = {k: WheelGaitParams(drive_spin=-4.0) for k in WHEELS}
    g = GaitParams(wheels=w, label="straight")
    assert mirror(g) == g


# -- encode / decode ------------------------------------------------------------------

def test_default_space_dimension():
    assert default_space().d == 22


def test_roundtrip_on_trrp():
    space = default_space()
    g = preset("TRRP")
    back = decode(encode(g, space), space)
    for w in WHEELS:
        for attr in ("drive_spin", "sweep_amplitude", "sweep_out_rate", "sweep_in_rate",
                     "spin_during_sweep_out", "spin_during_sweep_in", "leg_extension"):
            assert getattr(back.wheels[w], attr) == pytest.approx(
                getattr(g.wheels[w], attr), abs=1e-9
            ), (w, attr)


def test_roundtrip_on_random_gaits(rng):
    space = default_space()
    for _ in range(1000):
        g = decode(rng.random(22), space)
        v = encode(g, space)
        back = decode(v, space)
        for w in WHEELS:
            for attr in ("drive_spin", "sweep_amplitude", "sweep_out_rate", "sweep_in_rate",
                         "spin_during_sweep_out", "spin_during_sweep_in", "leg_extension"):
                assert abs(getattr(back.wheels[w], attr) - getattr(g.wheels[w], attr)) < 1e-9


def test_affine_map_endpoints_and_midpoint():
    space = ParamSpace(dims=(
        Dim("a", 2.0, 6.0, CONTINUOUS),
        Dim("b", -1.0, 1.0, CONTINUOUS),
    ))
    assert np.allclose(space.encode({"a": 2.0, "b": -1.0}), [0.0, 0.0])
    assert np.allclose(space.encode({"a": 4.0, "b": 0.0}), [0.5, 0.5])
    assert np.allclose(space.encode({"a": 6.0, "b": 1.0}), [1.0, 1.0])


def test_encode_out_of_bounds_names_fields():
    space = default_space()
    g = preset("TRRP")
    bad_wheels = dict(g.wheels)
    bad_wheels["RL"] = WheelGaitParams(
        drive_spin=99.0, sweep_amplitude=MAX_SWEEP_AMPLITUDE,
        sweep_out_rate=2.0, sweep_in_rate=2.0,
    )
    bad = GaitParams(wheels=bad_wheels, label="bad")
    with pytest.raises(RangeError) as err:
        encode(bad, space)
    assert "RL.drive_spin_mag" in err.value.fields


def test_decode_rejects_out_of_cube():
    space = default_space()
    v = np.full(22, 0.5)
    v[3] = 1.2
    with pytest.raises(RangeError):
        decode(v, space)


# -- JSON schema -------------------------------------------------------------------

def test_gait_json_roundtrip():
    g = preset("ML_INSPIRED")
    doc = gait_to_json(g)
    assert doc["schema_version"] == "gait.v1"
    assert "sweep_out_rate_rad_s" in doc["wheels"]["RR"]
    back = gait_from_json(json.loads(json.dumps(doc)))
    assert back == g


def test_gait_json_rejects_unknown_version():
    doc = gait_to_json(preset("TRRP"))
    doc["schema_version"] = "gait.v999"
    with pytest.raises(InvalidInputError):
        gait_from_json(doc)


def test_gait_validation_catches_bad_fields():
    w = {k: WheelGaitParams() for k in WHEELS}
    w["FL"] = WheelGaitParams(sweep_amplitude=3.0)  # beyond the 100-degree cap
    with pytest.raises(InvalidInputError):
        GaitParams(wheels=w).validate()
