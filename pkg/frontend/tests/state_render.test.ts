import { describe, expect, it } from "vitest";

import { LabClient } from "../src/api.js";
import { fnv1a64 } from "../src/hash.js";
import {
  backingSize,
  curvePoints,
  fitViewport,
  phasePath,
  project,
  seriesPath,
  toPolyline,
} from "../src/render.js";
import { ExplorerController, clampExponent, inRigidityWindow } from "../src/state.js";
import { layoutStrip, pickExponent } from "../src/strip.js";
import type { SolveResponse, StripResponse } from "../src/types.js";
import { fixture, fixtureRouter, makeFetch } from "./helpers.js";

describe("hash", () => {
  it("is deterministic and sensitive", () => {
    expect(fnv1a64("abc")).toBe(fnv1a64("abc"));
    expect(fnv1a64("abc")).not.toBe(fnv1a64("abd"));
    expect(fnv1a64("")).toMatch(/^[0-9a-f]{16}$/);
  });
});

describe("request sequencing", () => {
  it("discards responses of superseded requests", async () => {
    const gates: Array<() => void> = [];
    const slowFetch = async () => {
      await new Promise<void>((resolve) => gates.push(resolve));
      return new Response(JSON.stringify(fixture<SolveResponse>("solve_a2_rot3_7")),
                          { status: 200 });
    };
    const controller = new ExplorerController(new LabClient("http://lab.test", slowFetch));
    const first = controller.solve({ a: 2, rot: "3/7" });
    const second = controller.solve({ a: 2, rot: "3/7", samples: 1024 });
    // release in order: the first reply arrives after being superseded
    gates[0]!();
    gates[1]!();
    const [r1, r2] = await Promise.all([first, second]);
    expect(r1.stale).toBe(true);
    expect(r2.stale).toBe(false);
    expect(controller.history.length).toBe(1);
  });
});

describe("rigidity window affordance", () => {
  it("snaps slider values out of [1/2, 1]", () => {
    expect(clampExponent(0.7)).toBe(0.5);
    expect(clampExponent(0.9)).toBe(1.0);
    expect(clampExponent(0.3)).toBe(0.3);
    expect(clampExponent(1.4)).toBe(1.4);
    expect(inRigidityWindow(0.75)).toBe(true);
    expect(inRigidityWindow(2)).toBe(false);
  });
});

describe("viewport fitting", () => {
  const square: [number, number][] = [[-1, -1], [1, -1], [1, 1], [-1, 1]];

  it("maps the bounding box inside the canvas with margin", () => {
    const view = fitViewport(square, 200, 100, 0.05);
    for (const p of square) {
      const [x, y] = project(view, p);
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(200);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(100);
    }
  });

  it("preserves aspect ratio and flips the vertical axis", () => {
    const view = fitViewport(square, 300, 300, 0.0);
    const [, yLow] = project(view, [0, -1]);
    const [, yHigh] = project(view, [0, 1]);
    expect(yHigh).toBeLessThan(yLow); // larger y drawn higher on screen
    const [x0] = project(view, [-1, 0]);
    const [x1] = project(view, [1, 0]);
    expect(x1 - x0).toBeCloseTo(yLow - yHigh, 10);
  });

  it("centers the content", () => {
    const view = fitViewport(square, 400, 400, 0.05);
    const [cx, cy] = project(view, [0, 0]);
    expect(cx).toBeCloseTo(200, 8);
    expect(cy).toBeCloseTo(200, 8);
  });
});

describe("paths from backend samples", () => {
  it("extracts curve points from (t, x, y) samples", () => {
    const raw = fixture<SolveResponse>("solve_a2_rot3_7");
    const pts = curvePoints(raw.samples);
    expect(pts.length).toBe(raw.samples.length);
    expect(pts[0]![0]).toBe(raw.samples[0]![1]);
    expect(pts[0]![1]).toBe(raw.samples[0]![2]);
  });

  it("series and phase paths stay inside their strip", () => {
    const raw = fixture<SolveResponse>("solve_a2_rot3_7");
    for (const [x, y] of seriesPath(raw.orbit.F, 300, 200)) {
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(300);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(200);
    }
    const path = phasePath(raw.orbit.F, raw.orbit.Fp, 300, 200);
    expect(path.length).toBe(raw.orbit.F.length);
  });

  it("device pixel scaling rounds the backing store", () => {
    expect(backingSize(460, 460, 2)).toEqual({ width: 920, height: 920 });
    expect(backingSize(460, 460, 1.5)).toEqual({ width: 690, height: 690 });
  });
});

describe("spectrum strip", () => {
  const strip = fixture<StripResponse>("strip");

  it("positions bands, window and degenerate points from backend data", () => {
    const layout = layoutStrip(strip, 780);
    expect(layout.points.length).toBeGreaterThanOrEqual(4);
    const labels = layout.points.map((p) => p.a);
    expect(labels).toContain("7/5");
    expect(labels).toContain("7/6");
    expect(labels).toContain("23/21");
    // the local-max band covers (0, 1/3)
    const localMax = layout.bands.find((b) => b.classification === "local-max")!;
    expect(localMax.x0).toBeLessThan(localMax.x1);
    // rigidity window sits inside the domain
    expect(layout.window.x0).toBeGreaterThan(0);
    expect(layout.window.x1).toBeLessThan(780);
  });

  it("clicking a degenerate point snaps the slider to its exponent", () => {
    const layout = layoutStrip(strip, 780);
    const target = layout.points.find((p) => p.a === "7/5")!;
    const picked = pickExponent(layout, target.x + 2, 780);
    expect(picked.snapped).toBe("7/5");
    expect(picked.a).toBe(target.aFloat);
  });

  it("clicking elsewhere maps linearly into the domain", () => {
    const layout = layoutStrip(strip, 780);
    const picked = pickExponent(layout, 780, 780);
    expect(picked.snapped).toBeNull();
    expect(picked.a).toBeCloseTo(layout.domain[1], 10);
  });
});
