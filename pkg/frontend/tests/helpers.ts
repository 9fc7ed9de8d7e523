import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", `${name}.json`), "utf-8");
}

export function fixture<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface RouteReply {
  status: number;
  body: string;
}

export type Router = (
  method: string,
  path: string,
  search: string,
  body: string | null,
) => RouteReply | null;

/** fetch stub backed by recorded backend replies. */
export function makeFetch(router: Router): FetchLike {
  return async (url, init) => {
    const parsed = new URL(url);
    const body = init?.body ? String(init.body) : null;
    const reply = router(init?.method ?? "GET", parsed.pathname, parsed.search, body);
    if (!reply) {
      return new Response(JSON.stringify({ error: `no route for ${parsed.pathname}` }), {
        status: 404,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response(reply.body, {
      status: reply.status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

/** Router reproducing the recorded endpoints deterministically. */
export function fixtureRouter(): Router {
  const solveByKey = new Map<string, string>([
    ["2|3/7|1024", fixtureText("solve_a2_rot3_7")],
    ["-1|5/9|1024", fixtureText("solve_am1_rot5_9")],
  ]);
  return (method, path, search, body) => {
    if (method === "POST" && path === "/solve" && body) {
      const spec = JSON.parse(body) as { a: number; rot: string; samples?: number };
      if (spec.rot === "1/3") {
        const refusal = fixtureText("solve_unreachable");
        const payload = JSON.parse(refusal) as Record<string, unknown>;
        delete payload["__status__"];
        return { status: 422, body: JSON.stringify(payload) };
      }
      const key = `${spec.a}|${spec.rot}|${spec.samples ?? 2048}`;
      const text = solveByKey.get(key);
      return text ? { status: 200, body: text } : null;
    }
    if (method === "POST" && path === "/third") {
      return { status: 200, body: fixtureText("third_eps0_3_n1") };
    }
    if (method === "GET" && path === "/classify") {
      if (search.includes("a=1.4")) return { status: 200, body: fixtureText("classify_a1_4") };
      if (search.includes("a=0.2")) return { status: 200, body: fixtureText("classify_a0_2") };
      return null;
    }
    if (method === "GET" && path === "/spectrum")
      return { status: 200, body: fixtureText("spectrum_a1_4") };
    if (method === "GET" && path === "/spectrum-strip")
      return { status: 200, body: fixtureText("strip") };
    if (method === "GET" && path === "/rotation-range")
      return { status: 200, body: fixtureText("rotation_range_a2") };
    return null;
  };
}
