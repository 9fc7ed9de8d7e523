/** Canvas-independent drawing geometry: viewport fitting, polyline paths,
 * and device-pixel scaling.  The actual 2D-context calls live in app.ts;
 * everything here is pure and unit-tested. */

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
  width: number;
  height: number;
}

export type Point = [number, number];

export function fitViewport(
  points: readonly Point[],
  width: number,
  height: number,
  margin = 0.05,
): Viewport {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of points) {
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  const spanX = Math.max(xMax - xMin, 1e-12);
  const spanY = Math.max(yMax - yMin, 1e-12);
  const pad = margin * Math.max(spanX, spanY);
  const scale = Math.min(width / (spanX + 2 * pad), height / (spanY + 2 * pad));
  // center the box; the y axis flips so positive orientation reads
  // counterclockwise on screen
  const offsetX = width / 2 - scale * (xMin + xMax) / 2;
  const offsetY = height / 2 + scale * (yMin + yMax) / 2;
  return { scale, offsetX, offsetY, width, height };
}

export function project(view: Viewport, point: Point): Point {
  return [
    view.offsetX + view.scale * point[0],
    view.offsetY - view.scale * point[1],
  ];
}

export function toPolyline(view: Viewport, points: readonly Point[]): Point[] {
  return points.map((p) => project(view, p));
}

export function curvePoints(samples: readonly [number, number, number][]): Point[] {
  return samples.map(([, x, y]) => [x, y] as Point);
}

/** Profile chart: map (t, value) series into an axis-aligned strip. */
export function seriesPath(
  values: readonly number[],
  width: number,
  height: number,
  pad = 6,
): Point[] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = Math.max(hi - lo, 1e-12);
  const n = values.length - 1;
  return values.map((v, i) => [
    pad + ((width - 2 * pad) * i) / Math.max(n, 1),
    height - pad - ((height - 2 * pad) * (v - lo)) / span,
  ]);
}

/** Phase-portrait path from backend profile samples (F, F'). */
export function phasePath(
  F: readonly number[],
  Fp: readonly number[],
  width: number,
  height: number,
  margin = 0.1,
): Point[] {
  const pts: Point[] = F.map((f, i) => [f, Fp[i] ?? 0]);
  const view = fitViewport(pts, width, height, margin);
  return toPolyline(view, pts);
}

/** Device-pixel scaling: returns the backing-store size for a CSS size. */
export function backingSize(cssWidth: number, cssHeight: number, dpr: number) {
  return {
    width: Math.round(cssWidth * dpr),
    height: Math.round(cssHeight * dpr),
  };
}
