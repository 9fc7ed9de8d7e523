/** Layout model of the spectrum strip: classification bands and the
 * degenerate exponents on the a axis, with click-to-set-slider mapping.
 * All numbers (band edges, point positions, labels) come from the backend
 * strip payload. */

import type { StripResponse } from "./types.js";

export interface StripLayout {
  domain: [number, number];
  bands: { x0: number; x1: number; classification: string }[];
  points: { x: number; k: number; a: string; aFloat: number }[];
  window: { x0: number; x1: number };
}

export function layoutStrip(
  strip: StripResponse,
  width: number,
  domain: [number, number] = [-1.0, 2.0],
): StripLayout {
  const [lo, hi] = domain;
  const toX = (a: number) => ((a - lo) / (hi - lo)) * width;
  const clamp = (x: number) => Math.max(0, Math.min(width, x));
  return {
    domain,
    bands: strip.bands.map((band) => ({
      x0: clamp(toX(band.range[0] ?? lo)),
      x1: clamp(toX(band.range[1] ?? hi)),
      classification: band.classification,
    })),
    points: strip.degenerate
      .filter((p) => p.a_float >= lo && p.a_float <= hi)
      .map((p) => ({ x: toX(p.a_float), k: p.k, a: p.a, aFloat: p.a_float })),
    window: {
      x0: clamp(toX(strip.rigidity_window[0])),
      x1: clamp(toX(strip.rigidity_window[1])),
    },
  };
}

/** Inverse of the layout: a click x selects the exponent under the cursor,
 * snapping to a degenerate point when within the pick radius. */
export function pickExponent(
  layout: StripLayout,
  x: number,
  width: number,
  pickRadius = 6,
): { a: number; snapped: string | null } {
  for (const point of layout.points) {
    if (Math.abs(point.x - x) <= pickRadius) {
      return { a: point.aFloat, snapped: point.a };
    }
  }
  const [lo, hi] = layout.domain;
  return { a: lo + (x / width) * (hi - lo), snapped: null };
}
