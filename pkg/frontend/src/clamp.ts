// Client-side bounds handling: every gait leaving the editor is clamped so
// the service never rejects it, and search-space vectors decode to gait
// documents exactly like the backend's codec.

import type { GaitDoc, SpaceDim, WheelDoc, WheelName } from "./types.js";
import { WHEELS } from "./types.js";

export const MAX_SWEEP_AMPLITUDE_RAD = 1.7453292519943295; // 100 degrees
export const MAX_SPIN_RAD_S = 12.0;
const MIN_SWEEP_RATE = 0.05;

export interface ClampChange {
  field: string;
  from: number;
  to: number;
}

function byName(dims: SpaceDim[]): Map<string, SpaceDim> {
  return new Map(dims.map((d) => [d.name, d]));
}

function clampTo(value: number, lower: number, upper: number): number {
  return Math.min(upper, Math.max(lower, value));
}

/**
 * Clamp a gait document in place of submission: searched fields go to their
 * ParamSpace bounds, the rest to the service's validation bounds.  Returns
 * the clamped copy plus the list of adjusted fields for inline warnings.
 */
export function clampGait(
  gait: GaitDoc,
  dims: SpaceDim[],
): { gait: GaitDoc; changes: ClampChange[] } {
  const lookup = byName(dims);
  const changes: ClampChange[] = [];
  const wheels = {} as Record<WheelName, WheelDoc>;

  const apply = (field: string, value: number, lower: number, upper: number): number => {
    const out = clampTo(value, lower, upper);
    if (out !== value) {
      changes.push({ field, from: value, to: out });
    }
    return out;
  };

  for (const w of WHEELS) {
    const src = gait.wheels[w];
    const dim = (suffix: string) => lookup.get(`${w}.${suffix}`);

    const magDim = dim("drive_spin_mag");
    const magnitude = apply(
      `${w}.drive_spin_rad_s`,
      Math.abs(src.drive_spin_rad_s),
      magDim?.lower ?? 0.0,
      magDim?.upper ?? MAX_SPIN_RAD_S,
    );
    const driveSpin = src.drive_spin_rad_s < 0 ? -magnitude : magnitude;

    const ampDim = dim("sweep_amplitude");
    // amplitude 0 (no pedaling) stays legal even when the searched range
    // starts above zero
    const amp =
      src.sweep_amplitude_rad === 0.0
        ? 0.0
        : apply(
            `${w}.sweep_amplitude_rad`,
            src.sweep_amplitude_rad,
            ampDim?.lower ?? 0.0,
            ampDim?.upper ?? MAX_SWEEP_AMPLITUDE_RAD,
          );

    const outDim = dim("sweep_out_rate");
    const inDim = dim("sweep_in_rate");
    const spinOutDim = dim("spin_during_sweep_out");
    const spinInDim = dim("spin_during_sweep_in");
    const extDim = dim("leg_extension");

    wheels[w] = {
      drive_spin_rad_s: driveSpin,
      sweep_amplitude_rad: amp,
      sweep_out_rate_rad_s: apply(
        `${w}.sweep_out_rate_rad_s`, src.sweep_out_rate_rad_s,
        outDim?.lower ?? MIN_SWEEP_RATE, outDim?.upper ?? MAX_SPIN_RAD_S,
      ),
      sweep_in_rate_rad_s: apply(
        `${w}.sweep_in_rate_rad_s`, src.sweep_in_rate_rad_s,
        inDim?.lower ?? MIN_SWEEP_RATE, inDim?.upper ?? MAX_SPIN_RAD_S,
      ),
      spin_during_sweep_out_rad_s: apply(
        `${w}.spin_during_sweep_out_rad_s`, src.spin_during_sweep_out_rad_s,
        spinOutDim?.lower ?? -MAX_SPIN_RAD_S, spinOutDim?.upper ?? MAX_SPIN_RAD_S,
      ),
      spin_during_sweep_in_rad_s: apply(
        `${w}.spin_during_sweep_in_rad_s`, src.spin_during_sweep_in_rad_s,
        spinInDim?.lower ?? -MAX_SPIN_RAD_S, spinInDim?.upper ?? MAX_SPIN_RAD_S,
      ),
      leg_extension_frac: apply(
        `${w}.leg_extension_frac`, src.leg_extension_frac,
        extDim?.lower ?? 0.0, extDim?.upper ?? 1.0,
      ),
      phase_offset_frac: apply(
        `${w}.phase_offset_frac`, src.phase_offset_frac, 0.0, 0.999,
      ),
    };
  }
  return {
    gait: { ...gait, wheels },
    changes,
  };
}

/** Decode a unit-cube vector into a gait document (the backend's codec). */
export function decodeVector(
  x: number[],
  dims: SpaceDim[],
  label = "custom",
): GaitDoc {
  if (x.length !== dims.length) {
    throw new Error(`expected ${dims.length} coordinates, got ${x.length}`);
  }
  const values = new Map<string, number>();
  dims.forEach((dim, i) => {
    const u = x[i];
    if (u < 0 || u > 1) {
      throw new Error(`${dim.name}: unit value ${u} outside [0, 1]`);
    }
    values.set(
      dim.name,
      dim.kind === "sign" ? (u >= 0.5 ? 1.0 : -1.0) : dim.lower + u * (dim.upper - dim.lower),
    );
  });
  const wheels = {} as Record<WheelName, WheelDoc>;
  for (const w of WHEELS) {
    const get = (suffix: string, fallback: number) =>
      values.get(`${w}.${suffix}`) ?? fallback;
    const magnitude = get("drive_spin_mag", 0.0);
    const direction = get("drive_spin_dir", 1.0);
    wheels[w] = {
      drive_spin_rad_s: magnitude * direction,
      sweep_amplitude_rad: get("sweep_amplitude", 0.0),
      sweep_out_rate_rad_s: get("sweep_out_rate", 1.0),
      sweep_in_rate_rad_s: get("sweep_in_rate", 1.0),
      spin_during_sweep_out_rad_s: get("spin_during_sweep_out", 0.0),
      spin_during_sweep_in_rad_s: get("spin_during_sweep_in", 0.0),
      leg_extension_frac: get("leg_extension", 0.5),
      phase_offset_frac: 0.0,
    };
  }
  return {
    schema_version: "gait.v1",
    label,
    roll_posture_tracking: false,
    wheels,
  };
}
