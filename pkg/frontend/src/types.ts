/** Response shapes of the centrolab JSON API (the single source of truth
 * for every number the explorer displays). */

export interface OrbitData {
  a: number;
  b: number;
  c: number;
  d: number;
  m: number;
  M: number;
  period: number;
  F: number[];
  Fp: number[];
}

export interface OverlayData {
  constant_profile: boolean;
  vertices: [number, number][];
  conics: [number, number][][];
}

export interface SolveResponse {
  period: number;
  samples: [number, number, number][];
  covering: number;
  rotation_number: string;
  winding: number;
  vertices: number[];
  closure_defect: number;
  orbit: OrbitData;
  overlays: OverlayData;
}

export interface ClassifyResponse {
  a: string;
  a_float: number;
  classification: string;
  kernel_harmonic: number | null;
}

export interface SpectrumResponse {
  a: string;
  hit: boolean;
  k?: number;
  n?: number;
  hits: { k: number; n: number; trivial: boolean }[];
}

export interface StripPoint {
  k: number;
  a: string;
  a_float: number;
}

export interface StripResponse {
  degenerate: StripPoint[];
  bands: { range: [number | null, number | null]; classification: string }[];
  rigidity_window: [number, number];
}

export interface RotationRangeResponse {
  a: number;
  low: number;
  high: number;
}

export interface ThirdResponse {
  mu: number;
  eps: number;
  n: number;
  C: number;
  G: number[];
  phi: number[];
  verdict: string;
  deviation: number;
  center: [number, number];
  radius: number;
  curve: { period: number; samples: [number, number, number][] };
}

export interface RefusalPayload {
  error: string;
  attained_range?: [number, number];
}

export interface JobSpec {
  a: number;
  rot: string;
  c?: number | null;
  samples?: number;
}
