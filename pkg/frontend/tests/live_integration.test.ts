/** Optional end-to-end check against a live backend: set LAB_URL (e.g.
 * http://127.0.0.1:8439) to enable. */

import { describe, expect, it } from "vitest";

import { LabClient } from "../src/api.js";
import { ExplorerController } from "../src/state.js";

const base = process.env["LAB_URL"];

describe.skipIf(!base)("live backend", () => {
  it("solves, classifies and replays against the running server", async () => {
    const client = new LabClient(base!);
    const classify = await client.classify("1.4");
    expect(classify.data.classification).toBe("degenerate");
    expect(classify.data.kernel_harmonic).toBe(3);

    const controller = new ExplorerController(client);
    const outcome = await controller.solve({ a: 2, rot: "3/7", samples: 1024 });
    expect(outcome.reply!.data.winding).toBe(3);
    const replays = await controller.replayAll();
    expect(replays.every((r) => r.matches)).toBe(true);

    const strip = await client.spectrumStrip();
    expect(strip.data.degenerate.some((p) => p.a === "7/5")).toBe(true);
  }, 120000);
});
