// Hand-rolled SVG charts: a yaw-vs-time panel with run overlays and a
// top-view trajectory panel.  Charts render purely from stored responses;
// nothing here triggers a simulation.

import type { SimulateResponse } from "./types.js";

export interface StoredRun {
  label: string;
  color: string;
  response: SimulateResponse;
}

const PALETTE = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0891b2", "#4b5563", "#ca8a04"];

/** Keeps the most recent runs for overlay comparison. */
export class RunStore {
  private runs: StoredRun[] = [];

  constructor(private readonly capacity = 8) {}

  add(label: string, response: SimulateResponse): StoredRun {
    const run = {
      label,
      color: PALETTE[this.runs.length % PALETTE.length],
      response,
    };
    this.runs.push(run);
    if (this.runs.length > this.capacity) {
      this.runs.shift();
    }
    return run;
  }

  all(): StoredRun[] {
    return [...this.runs];
  }

  clear(): void {
    this.runs = [];
  }
}

interface Bounds {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

function extend(bounds: Bounds, x: number, y: number): void {
  bounds.xMin = Math.min(bounds.xMin, x);
  bounds.xMax = Math.max(bounds.xMax, x);
  bounds.yMin = Math.min(bounds.yMin, y);
  bounds.yMax = Math.max(bounds.yMax, y);
}

function span(lo: number, hi: number): number {
  return hi - lo > 1e-12 ? hi - lo : 1.0;
}

export function polylinePath(
  points: Array<[number, number]>,
  bounds: Bounds,
  width: number,
  height: number,
  pad = 30,
): string {
  const sx = (width - 2 * pad) / span(bounds.xMin, bounds.xMax);
  const sy = (height - 2 * pad) / span(bounds.yMin, bounds.yMax);
  return points
    .map(([x, y], i) => {
      const px = pad + (x - bounds.xMin) * sx;
      const py = height - pad - (y - bounds.yMin) * sy;
      return `${i === 0 ? "M" : "L"}${px.toFixed(2)},${py.toFixed(2)}`;
    })
    .join("");
}

const DEG = 180 / Math.PI;

/** Yaw-vs-time chart (degrees) with a target line and one polyline per run. */
export function yawChartSvg(
  runs: StoredRun[],
  width = 560,
  height = 300,
  targetDeg = 90,
): string {
  const bounds: Bounds = { xMin: 0, xMax: 1, yMin: 0, yMax: targetDeg * 1.1 };
  for (const run of runs) {
    for (const p of run.response.trajectory) {
      extend(bounds, p.t_s, p.yaw_rad * DEG);
    }
  }
  const paths = runs
    .map((run) => {
      const pts = run.response.trajectory.map(
        (p) => [p.t_s, p.yaw_rad * DEG] as [number, number],
      );
      return `<path d="${polylinePath(pts, bounds, width, height)}" fill="none" stroke="${run.color}" stroke-width="1.8"><title>${run.label}</title></path>`;
    })
    .join("");
  const targetPts: Array<[number, number]> = [
    [bounds.xMin, targetDeg],
    [bounds.xMax, targetDeg],
  ];
  const target = `<path d="${polylinePath(targetPts, bounds, width, height)}" fill="none" stroke="#999" stroke-dasharray="4 4"/>`;
  const legend = runs
    .map(
      (run, i) =>
        `<text x="${36 + i * 130}" y="16" fill="${run.color}" font-size="11">${run.label}</text>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg" role="img" aria-label="yaw versus time">` +
    axes(bounds, width, height, "t [s]", "yaw [deg]") +
    target +
    paths +
    legend +
    "</svg>"
  );
}

/** Equal-aspect top view of the body path on the slope plane. */
export function pathChartSvg(runs: StoredRun[], size = 300): string {
  const bounds: Bounds = { xMin: -0.1, xMax: 0.1, yMin: -0.1, yMax: 0.1 };
  for (const run of runs) {
    for (const p of run.response.trajectory) {
      extend(bounds, p.x_m, p.y_m);
    }
  }
  // equalize spans so the path is not distorted
  const cx = (bounds.xMin + bounds.xMax) / 2;
  const cy = (bounds.yMin + bounds.yMax) / 2;
  const half = Math.max(span(bounds.xMin, bounds.xMax), span(bounds.yMin, bounds.yMax)) / 2;
  const eq: Bounds = { xMin: cx - half, xMax: cx + half, yMin: cy - half, yMax: cy + half };
  const paths = runs
    .map((run) => {
      const pts = run.response.trajectory.map((p) => [p.x_m, p.y_m] as [number, number]);
      return `<path d="${polylinePath(pts, eq, size, size)}" fill="none" stroke="${run.color}" stroke-width="1.5"><title>${run.label}</title></path>`;
    })
    .join("");
  const start = `<circle cx="${size / 2}" cy="${size / 2}" r="0" fill="none"/>`;
  return (
    `<svg viewBox="0 0 ${size} ${size}" xmlns="http://www.w3.org/2000/svg" role="img" aria-label="top view path">` +
    axes(eq, size, size, "x [m]", "y [m] (uphill)") +
    paths +
    start +
    "</svg>"
  );
}

function axes(bounds: Bounds, width: number, height: number, xLabel: string, yLabel: string): string {
  const pad = 30;
  return (
    `<rect x="${pad}" y="${pad}" width="${width - 2 * pad}" height="${height - 2 * pad}" fill="none" stroke="#ccc"/>` +
    `<text x="${width / 2}" y="${height - 6}" font-size="10" fill="#555" text-anchor="middle">${xLabel}</text>` +
    `<text x="10" y="${height / 2}" font-size="10" fill="#555" transform="rotate(-90 10 ${height / 2})" text-anchor="middle">${yLabel}</text>` +
    `<text x="${pad}" y="${height - pad + 12}" font-size="9" fill="#777">${bounds.xMin.toPrecision(3)}</text>` +
    `<text x="${width - pad}" y="${height - pad + 12}" font-size="9" fill="#777" text-anchor="end">${bounds.xMax.toPrecision(3)}</text>` +
    `<text x="${pad - 4}" y="${height - pad}" font-size="9" fill="#777" text-anchor="end">${bounds.yMin.toPrecision(3)}</text>` +
    `<text x="${pad - 4}" y="${pad + 8}" font-size="9" fill="#777" text-anchor="end">${bounds.yMax.toPrecision(3)}</text>`
  );
}
