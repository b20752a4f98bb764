import { describe, expect, it } from "vitest";

import { clampGait, decodeVector, MAX_SWEEP_AMPLITUDE_RAD } from "../src/clamp.js";
import { WHEELS } from "../src/types.js";
import { decodeParity, presetsFixture } from "./fixtures.js";

const dims = presetsFixture.space.dims;

describe("decodeVector", () => {
  it("matches the backend codec on the parity fixtures", () => {
    for (const [name, pair] of Object.entries(decodeParity)) {
      const gait = decodeVector(pair.x, dims, pair.gait.label);
      for (const w of WHEELS) {
        for (const [field, expected] of Object.entries(pair.gait.wheels[w])) {
          const actual = gait.wheels[w][field as keyof typeof gait.wheels.FL];
          expect(Math.abs(actual - (expected as number)), `${name}:${w}.${field}`)
            .toBeLessThan(1e-9);
        }
      }
    }
  });

  it("thresholds sign dims at one half", () => {
    const mid = decodeVector(new Array(dims.length).fill(0.5), dims);
    // at exactly 0.5 the direction resolves positive
    expect(mid.wheels.FL.drive_spin_rad_s).toBeGreaterThan(0);
    const low = decodeVector(new Array(dims.length).fill(0.49), dims);
    expect(low.wheels.FL.drive_spin_rad_s).toBeLessThan(0);
  });

  it("rejects vectors outside the unit cube or of wrong length", () => {
    expect(() => decodeVector([0.5], dims)).toThrow();
    const bad = new Array(dims.length).fill(0.5);
    bad[3] = 1.3;
    expect(() => decodeVector(bad, dims)).toThrow();
  });
});

describe("clampGait", () => {
  it("clamps out-of-range edits and reports them", () => {
    const gait = structuredClone(presetsFixture.presets.TRRP);
    gait.wheels.RL.sweep_amplitude_rad = 9.0;
    gait.wheels.FR.leg_extension_frac = 1.7;
    gait.wheels.FL.drive_spin_rad_s = -99.0;
    const { gait: clamped, changes } = clampGait(gait, dims);
    expect(clamped.wheels.RL.sweep_amplitude_rad).toBeCloseTo(MAX_SWEEP_AMPLITUDE_RAD, 9);
    expect(clamped.wheels.FR.leg_extension_frac).toBe(1.0);
    expect(clamped.wheels.FL.drive_spin_rad_s).toBe(-12.0); // magnitude capped, sign kept
    const fields = changes.map((c) => c.field);
    expect(fields).toContain("RL.sweep_amplitude_rad");
    expect(fields).toContain("FR.leg_extension_frac");
    expect(fields).toContain("FL.drive_spin_rad_s");
  });

  it("leaves in-bounds presets untouched", () => {
    for (const preset of Object.values(presetsFixture.presets)) {
      const { gait, changes } = clampGait(structuredClone(preset), dims);
      expect(changes).toEqual([]);
      expect(gait).toEqual(preset);
    }
  });

  it("keeps zero amplitude (no pedaling) legal", () => {
    const gait = structuredClone(presetsFixture.presets.DS);
    const { gait: clamped, changes } = clampGait(gait, dims);
    expect(clamped.wheels.FL.sweep_amplitude_rad).toBe(0.0);
    expect(changes).toEqual([]);
  });
});
