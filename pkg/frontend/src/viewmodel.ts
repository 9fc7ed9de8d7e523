/** Pure mappings from backend payloads to the exact values the UI displays.
 *
 * Every field carries the backend value untouched together with its display
 * text (the decimal representation of that very value), so what is on
 * screen is provably the backend's number and nothing else.
 */

import type {
  ClassifyResponse,
  RotationRangeResponse,
  SolveResponse,
  ThirdResponse,
} from "./types.js";

export interface Shown<T> {
  label: string;
  value: T;
  text: string;
}

function shown<T extends number | string>(label: string, value: T): Shown<T> {
  return { label, value, text: String(value) };
}

export interface CurvePanelModel {
  fields: Shown<number | string>[];
  annotation: string;
}

export function curvePanel(data: SolveResponse): CurvePanelModel {
  const fields: Shown<number | string>[] = [
    shown("winding", data.winding),
    shown("covering", data.covering),
    shown("rotation number", data.rotation_number),
    shown("closure defect", data.closure_defect),
    shown("period", data.period),
    shown("profile min", data.orbit.m),
    shown("profile max", data.orbit.M),
    shown("profile period", data.orbit.period),
    shown("vertex count", data.vertices.length),
  ];
  return {
    fields,
    annotation: `winding ${String(data.winding)} (rotation ${data.rotation_number})`,
  };
}

export function classifyBanner(data: ClassifyResponse): Shown<string> {
  const text =
    data.classification === "degenerate"
      ? `degenerate: k=${String(data.kernel_harmonic)}`
      : data.classification;
  return { label: `a = ${data.a}`, value: data.classification, text };
}

export function thirdPanel(data: ThirdResponse): Shown<number | string>[] {
  return [
    shown("verdict", data.verdict),
    shown("deviation", data.deviation),
    shown("winding", data.n),
    shown("radius", data.radius),
    shown("center x", data.center[0]),
    shown("center y", data.center[1]),
    shown("profile mean", data.mu),
    shown("profile amplitude", data.eps),
  ];
}

export function refusalText(attained: [number, number] | null, message: string): string {
  if (!attained) return message;
  return `unreachable: attainable rotation fractions (${String(attained[0])}, ${String(attained[1])})`;
}

export function rotationRangeText(data: RotationRangeResponse): Shown<string> {
  return {
    label: "attainable rotation fractions",
    value: `(${String(data.low)}, ${String(data.high)})`,
    text: `(${String(data.low)}, ${String(data.high)})`,
  };
}
