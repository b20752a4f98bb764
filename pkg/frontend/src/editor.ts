// Gait editor panel: per-wheel numeric fields mirroring the gait JSON
// schema, clamped against the search-space bounds on submission.

import { clampGait, type ClampChange } from "./clamp.js";
import type { EpisodeSummary, GaitDoc, SpaceDim, WheelDoc, WheelName } from "./types.js";
import { WHEELS } from "./types.js";

const FIELDS: Array<{ key: keyof WheelDoc; label: string; step: number }> = [
  { key: "drive_spin_rad_s", label: "drive spin [rad/s]", step: 0.5 },
  { key: "sweep_amplitude_rad", label: "sweep amplitude [rad]", step: 0.05 },
  { key: "sweep_out_rate_rad_s", label: "sweep-out rate [rad/s]", step: 0.1 },
  { key: "sweep_in_rate_rad_s", label: "sweep-in rate [rad/s]", step: 0.1 },
  { key: "spin_during_sweep_out_rad_s", label: "spin @ sweep-out [rad/s]", step: 0.5 },
  { key: "spin_during_sweep_in_rad_s", label: "spin @ sweep-in [rad/s]", step: 0.5 },
  { key: "leg_extension_frac", label: "leg extension [0..1]", step: 0.05 },
  { key: "phase_offset_frac", label: "phase offset [0..1)", step: 0.05 },
];

export interface EditorState {
  gait: GaitDoc;
  dirty: boolean;
  selectedPreset: string | null;
  lastSummary: EpisodeSummary | null;
}

export class GaitEditor {
  readonly state: EditorState;
  private container: HTMLElement | null = null;
  private warnings: HTMLElement | null = null;
  private inputs = new Map<string, HTMLInputElement>();
  private tracking: HTMLInputElement | null = null;

  constructor(
    private readonly doc: Document,
    initial: GaitDoc,
    private readonly dims: SpaceDim[],
  ) {
    this.state = {
      gait: structuredClone(initial),
      dirty: false,
      selectedPreset: initial.label,
      lastSummary: null,
    };
  }

  mount(container: HTMLElement): void {
    this.container = container;
    container.textContent = "";
    const grid = this.doc.createElement("div");
    grid.className = "editor-grid";
    const corner = this.doc.createElement("div");
    corner.className = "editor-head";
    grid.appendChild(corner);
    for (const w of WHEELS) {
      const head = this.doc.createElement("div");
      head.className = "editor-head";
      head.textContent = w;
      grid.appendChild(head);
    }
    for (const field of FIELDS) {
      const label = this.doc.createElement("div");
      label.className = "editor-label";
      label.textContent = field.label;
      grid.appendChild(label);
      for (const w of WHEELS) {
        const input = this.doc.createElement("input");
        input.type = "number";
        input.step = String(field.step);
        input.dataset.wheel = w;
        input.dataset.field = field.key;
        input.addEventListener("input", () => {
          this.state.dirty = true;
        });
        this.inputs.set(`${w}.${field.key}`, input);
        grid.appendChild(input);
      }
    }
    container.appendChild(grid);

    const trackingRow = this.doc.createElement("label");
    trackingRow.className = "tracking-row";
    this.tracking = this.doc.createElement("input");
    this.tracking.type = "checkbox";
    this.tracking.addEventListener("input", () => {
      this.state.dirty = true;
    });
    trackingRow.appendChild(this.tracking);
    trackingRow.appendChild(
      this.doc.createTextNode(" roll-posture tracking (schedule leg extensions with yaw)"),
    );
    container.appendChild(trackingRow);

    this.warnings = this.doc.createElement("div");
    this.warnings.className = "clamp-warnings";
    container.appendChild(this.warnings);
    this.writeForm();
  }

  loadGait(gait: GaitDoc, presetName: string | null = null): void {
    this.state.gait = structuredClone(gait);
    this.state.selectedPreset = presetName;
    this.state.dirty = false;
    this.writeForm();
  }

  /** Read the form, clamp to bounds, surface warnings, return the gait. */
  readGait(): { gait: GaitDoc; changes: ClampChange[] } {
    const gait = structuredClone(this.state.gait);
    for (const w of WHEELS) {
      for (const field of FIELDS) {
        const input = this.inputs.get(`${w}.${field.key}`);
        if (input && input.value !== "") {
          gait.wheels[w][field.key] = Number(input.value);
        }
      }
    }
    gait.roll_posture_tracking = this.tracking?.checked ?? gait.roll_posture_tracking;
    gait.label = this.state.dirty ? "custom" : gait.label;
    const clamped = clampGait(gait, this.dims);
    this.state.gait = clamped.gait;
    this.writeForm();
    this.showWarnings(clamped.changes);
    return clamped;
  }

  recordSummary(summary: EpisodeSummary): void {
    this.state.lastSummary = summary;
    this.state.dirty = false;
  }

  private writeForm(): void {
    if (!this.container) return;
    for (const w of WHEELS) {
      for (const field of FIELDS) {
        const input = this.inputs.get(`${w}.${field.key}`);
        if (input) {
          const value = this.state.gait.wheels[w][field.key];
          input.value = String(Number(value.toFixed(6)));
        }
      }
    }
    if (this.tracking) {
      this.tracking.checked = this.state.gait.roll_posture_tracking;
    }
  }

  private showWarnings(changes: ClampChange[]): void {
    if (!this.warnings) return;
    this.warnings.textContent = changes.length
      ? "clamped to bounds: " +
        changes.map((c) => `${c.field} ${c.from.toPrecision(4)}→${c.to.toPrecision(4)}`).join(", ")
      : "";
  }
}

export function summaryText(summary: EpisodeSummary): string {
  const target = summary.time_to_target_s;
  const deg = (summary.final_yaw_rad * 180) / Math.PI;
  return [
    `outcome: ${summary.outcome}`,
    `time to target: ${target === null ? "never" : target.toFixed(2) + " s"}`,
    `final yaw: ${deg.toFixed(1)}°`,
    `downhill drift: ${summary.downhill_drift_m.toFixed(3)} m`,
  ].join("  ·  ");
}
