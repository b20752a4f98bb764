import { describe, expect, it } from "vitest";

import { pathChartSvg, polylinePath, RunStore, yawChartSvg } from "../src/charts.js";
import { simulateParity } from "./fixtures.js";

const response = simulateParity.api_response;

describe("RunStore", () => {
  it("keeps at most the configured number of runs, in order", () => {
    const store = new RunStore(3);
    for (let i = 0; i < 5; i++) {
      store.add(`run${i}`, response);
    }
    expect(store.all().map((r) => r.label)).toEqual(["run2", "run3", "run4"]);
    store.clear();
    expect(store.all()).toEqual([]);
  });

  it("assigns distinct colors to consecutive runs", () => {
    const store = new RunStore();
    const a = store.add("a", response);
    const b = store.add("b", response);
    expect(a.color).not.toBe(b.color);
  });
});

describe("polylinePath", () => {
  it("emits a move followed by line segments inside the viewport", () => {
    const d = polylinePath(
      [[0, 0], [1, 1], [2, 0]],
      { xMin: 0, xMax: 2, yMin: 0, yMax: 1 },
      200, 100,
    );
    expect(d.startsWith("M")).toBe(true);
    expect(d.split("L").length).toBe(3);
    for (const [, x, y] of d.matchAll(/[ML]([\d.]+),([\d.]+)/g)) {
      expect(Number(x)).toBeGreaterThanOrEqual(0);
      expect(Number(x)).toBeLessThanOrEqual(200);
      expect(Number(y)).toBeGreaterThanOrEqual(0);
      expect(Number(y)).toBeLessThanOrEqual(100);
    }
  });
});

describe("chart rendering", () => {
  it("renders one path per stored run plus the target line", () => {
    const store = new RunStore();
    store.add("TRRP#1", response);
    store.add("TRRP#2", response);
    const svg = yawChartSvg(store.all());
    expect(svg.match(/<path /g)?.length).toBe(3);
    expect(svg).toContain("TRRP#1");
    expect(svg).toContain("yaw [deg]");
  });

  it("re-renders purely from stored responses", () => {
    const store = new RunStore();
    store.add("only", response);
    const first = yawChartSvg(store.all());
    const second = yawChartSvg(store.all());
    expect(second).toBe(first);
  });

  it("top view renders with equal-aspect bounds", () => {
    const store = new RunStore();
    store.add("only", response);
    const svg = pathChartSvg(store.all(), 300);
    expect(svg).toContain('viewBox="0 0 300 300"');
    expect(svg).toContain("top view path");
  });
});
