/** Explorer state: one in-flight solve per panel, stale responses dropped by
 * sequence number, and a replayable history of solved jobs keyed by the hash
 * of the exact backend reply. */

import type { LabClient, Reply, SolverRefusal } from "./api.js";
import type { JobSpec, SolveResponse } from "./types.js";

export interface HistoryEntry {
  spec: JobSpec;
  hash: string;
}

export interface SolveOutcome {
  stale: boolean;
  reply?: Reply<SolveResponse>;
  refusal?: SolverRefusal;
}

export interface ReplayOutcome {
  matches: boolean;
  expected: string;
  actual: string;
  reply: Reply<SolveResponse>;
}

function canonicalSpec(spec: JobSpec): JobSpec {
  return {
    a: spec.a,
    rot: spec.rot,
    c: spec.c ?? null,
    samples: spec.samples ?? 2048,
  };
}

export class ExplorerController {
  readonly history: HistoryEntry[] = [];
  private sequence = 0;

  constructor(private readonly client: LabClient) {}

  /** Latest-wins solve: responses to superseded requests report stale. */
  async solve(spec: JobSpec): Promise<SolveOutcome> {
    const ticket = ++this.sequence;
    const job = canonicalSpec(spec);
    try {
      const reply = await this.client.solve(job);
      if (ticket !== this.sequence) {
        return { stale: true };
      }
      this.history.push({ spec: job, hash: reply.hash });
      return { stale: false, reply };
    } catch (err) {
      if (ticket !== this.sequence) {
        return { stale: true };
      }
      if ((err as SolverRefusal).status === 422) {
        return { stale: false, refusal: err as SolverRefusal };
      }
      throw err;
    }
  }

  /** Re-post a stored job; determinism means the hash must match exactly. */
  async replay(entry: HistoryEntry): Promise<ReplayOutcome> {
    const reply = await this.client.solve(canonicalSpec(entry.spec));
    return {
      matches: reply.hash === entry.hash,
      expected: entry.hash,
      actual: reply.hash,
      reply,
    };
  }

  async replayAll(): Promise<ReplayOutcome[]> {
    const out: ReplayOutcome[] = [];
    for (const entry of this.history) {
      out.push(await this.replay(entry));
    }
    return out;
  }
}

/** Slider affordance for the exponent: the window [1/2, 1] is rigid
 * (constants only) and is skipped over rather than selectable. */
export function clampExponent(raw: number, window: [number, number] = [0.5, 1.0]): number {
  const [lo, hi] = window;
  if (raw <= lo || raw >= hi) return raw;
  return raw - lo < hi - raw ? lo : hi;
}

export function inRigidityWindow(a: number, window: [number, number] = [0.5, 1.0]): boolean {
  return a >= window[0] && a <= window[1];
}
