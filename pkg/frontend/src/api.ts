/** Typed client for the lab's JSON endpoints.
 *
 * The fetch implementation is injectable so tests can serve recorded
 * responses; every reply keeps its raw text alongside the parsed payload,
 * which is what the history hashes.
 */

import { fnv1a64 } from "./hash.js";
import type {
  ClassifyResponse,
  JobSpec,
  RefusalPayload,
  RotationRangeResponse,
  SolveResponse,
  SpectrumResponse,
  StripResponse,
  ThirdResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class SolverRefusal extends Error {
  readonly status: number;
  readonly attained: [number, number] | null;

  constructor(status: number, payload: RefusalPayload) {
    super(payload.error);
    this.status = status;
    this.attained = payload.attained_range ?? null;
  }
}

export interface Reply<T> {
  data: T;
  rawText: string;
  hash: string;
}

export class LabClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<Reply<T>> {
    const response = await this.fetchImpl(this.base + path, init);
    const rawText = await response.text();
    let payload: unknown;
    try {
      payload = JSON.parse(rawText);
    } catch {
      throw new Error(`non-JSON reply (${response.status}) from ${path}`);
    }
    if (response.status === 422) {
      throw new SolverRefusal(422, payload as RefusalPayload);
    }
    if (!response.ok) {
      const message = (payload as { error?: string }).error ?? rawText;
      throw new Error(`${response.status}: ${message}`);
    }
    return { data: payload as T, rawText, hash: fnv1a64(rawText) };
  }

  solve(spec: JobSpec): Promise<Reply<SolveResponse>> {
    return this.request<SolveResponse>("/solve", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(spec),
    });
  }

  third(eps: number, n: number, C = 0): Promise<Reply<ThirdResponse>> {
    return this.request<ThirdResponse>("/third", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ eps, n, C }),
    });
  }

  classify(a: string): Promise<Reply<ClassifyResponse>> {
    return this.request<ClassifyResponse>(`/classify?a=${encodeURIComponent(a)}`);
  }

  spectrum(a: string): Promise<Reply<SpectrumResponse>> {
    return this.request<SpectrumResponse>(`/spectrum?a=${encodeURIComponent(a)}`);
  }

  spectrumStrip(): Promise<Reply<StripResponse>> {
    return this.request<StripResponse>("/spectrum-strip");
  }

  rotationRange(a: number): Promise<Reply<RotationRangeResponse>> {
    return this.request<RotationRangeResponse>(`/rotation-range?a=${a}`);
  }

  zoo(): Promise<Reply<Record<string, unknown>>> {
    return this.request("/zoo");
  }
}
