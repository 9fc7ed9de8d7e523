/** DOM wiring of the explorer: sliders and panels on top of the pure
 * modules.  This file is the only one that touches the document. */

import { LabClient, SolverRefusal } from "./api.js";
import { curvePoints, fitViewport, phasePath, seriesPath, toPolyline, backingSize } from "./render.js";
import { ExplorerController, clampExponent, inRigidityWindow } from "./state.js";
import { layoutStrip, pickExponent } from "./strip.js";
import type { StripResponse, SolveResponse } from "./types.js";
import { classifyBanner, curvePanel, refusalText } from "./viewmodel.js";

const API_BASE = (window as unknown as { LAB_URL?: string }).LAB_URL ?? "http://127.0.0.1:8439";

const client = new LabClient(API_BASE);
const controller = new ExplorerController(client);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const aSlider = el<HTMLInputElement>("a-slider");
const aValue = el<HTMLSpanElement>("a-value");
const windingInput = el<HTMLInputElement>("winding");
const coveringInput = el<HTMLInputElement>("covering");
const cOverride = el<HTMLInputElement>("c-override");
const showVertices = el<HTMLInputElement>("show-vertices");
const showConics = el<HTMLInputElement>("show-conics");
const showPhase = el<HTMLInputElement>("show-phase");
const solveButton = el<HTMLButtonElement>("solve");
const statusLine = el<HTMLDivElement>("status");
const banner = el<HTMLDivElement>("banner");
const rangeLine = el<HTMLDivElement>("rotation-range");
const fieldsTable = el<HTMLTableElement>("fields");
const historyList = el<HTMLUListElement>("history");
const curveCanvas = el<HTMLCanvasElement>("curve-canvas");
const profileCanvas = el<HTMLCanvasElement>("profile-canvas");
const stripCanvas = el<HTMLCanvasElement>("strip-canvas");

let lastSolve: SolveResponse | null = null;
let stripData: StripResponse | null = null;

function context(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const dpr = window.devicePixelRatio || 1;
  const rect = canvas.getBoundingClientRect();
  const size = backingSize(rect.width, rect.height, dpr);
  if (canvas.width !== size.width || canvas.height !== size.height) {
    canvas.width = size.width;
    canvas.height = size.height;
  }
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d context unavailable");
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  ctx.clearRect(0, 0, rect.width, rect.height);
  return ctx;
}

function strokePath(ctx: CanvasRenderingContext2D, path: [number, number][],
                    color: string, width: number, dashed = false) {
  if (!path.length) return;
  ctx.save();
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.lineJoin = "round";
  if (dashed) ctx.setLineDash([5, 4]);
  ctx.beginPath();
  const first = path[0];
  if (first) ctx.moveTo(first[0], first[1]);
  for (const [x, y] of path.slice(1)) ctx.lineTo(x, y);
  ctx.stroke();
  ctx.restore();
}

function drawCurve(data: SolveResponse) {
  const ctx = context(curveCanvas);
  const rect = curveCanvas.getBoundingClientRect();
  const pts = curvePoints(data.samples);
  const extra: [number, number][] = showConics.checked
    ? data.overlays.conics.flat().map(([x, y]) => [x, y] as [number, number])
    : [];
  const view = fitViewport([...pts, ...extra], rect.width, rect.height);
  if (showConics.checked) {
    for (const ring of data.overlays.conics) {
      strokePath(ctx, toPolyline(view, ring), "#9aa0a6", 1, true);
    }
  }
  strokePath(ctx, toPolyline(view, pts), "#1f3a5f", 2);
  if (showVertices.checked && !data.overlays.constant_profile) {
    ctx.fillStyle = "#c0392b";
    for (const vertex of data.overlays.vertices) {
      const [x, y] = toPolyline(view, [vertex])[0]!;
      ctx.beginPath();
      ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.fillStyle = "#1f3a5f";
  ctx.font = "13px system-ui, sans-serif";
  ctx.fillText(curvePanel(data).annotation, 10, 18);
}

function drawProfile(data: SolveResponse) {
  const ctx = context(profileCanvas);
  const rect = profileCanvas.getBoundingClientRect();
  if (showPhase.checked) {
    strokePath(ctx, phasePath(data.orbit.F, data.orbit.Fp, rect.width, rect.height), "#7a5195", 1.5);
    ctx.fillStyle = "#555";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText("phase portrait (F, F')", 8, 14);
  } else {
    strokePath(ctx, seriesPath(data.orbit.F, rect.width, rect.height), "#2e7d32", 1.5);
    ctx.fillStyle = "#555";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText("profile F over one period", 8, 14);
  }
}

function renderFields(data: SolveResponse) {
  const model = curvePanel(data);
  fieldsTable.innerHTML = "";
  for (const field of model.fields) {
    const row = fieldsTable.insertRow();
    row.insertCell().textContent = field.label;
    row.insertCell().textContent = field.text;
  }
}

function renderHistory() {
  historyList.innerHTML = "";
  controller.history.forEach((entry, index) => {
    const item = document.createElement("li");
    const label = document.createElement("code");
    label.textContent =
      `a=${entry.spec.a} rot=${entry.spec.rot} hash=${entry.hash.slice(0, 12)}`;
    const button = document.createElement("button");
    button.textContent = "replay";
    button.addEventListener("click", async () => {
      button.disabled = true;
      const outcome = await controller.replay(entry);
      button.textContent = outcome.matches ? "replay ok" : "HASH MISMATCH";
      button.disabled = false;
      if (outcome.matches) show(outcome.reply.data);
    });
    item.append(label, " ", button);
    historyList.append(item);
  });
}

function show(data: SolveResponse) {
  lastSolve = data;
  drawCurve(data);
  drawProfile(data);
  renderFields(data);
}

async function runSolve() {
  const a = Number(aSlider.value);
  if (inRigidityWindow(a)) {
    statusLine.textContent =
      "rigidity window: constants only (multiply traversed conics); pick a outside [1/2, 1]";
    return;
  }
  const winding = Math.max(1, Math.round(Number(windingInput.value)));
  const covering = Math.max(winding + 1, Math.round(Number(coveringInput.value)));
  const spec = {
    a,
    rot: `${winding}/${covering}`,
    c: cOverride.value ? Number(cOverride.value) : null,
    samples: 1024,
  };
  statusLine.textContent = `solving a=${a}, rotation ${spec.rot} ...`;
  solveButton.disabled = true;
  try {
    const outcome = await controller.solve(spec);
    if (outcome.stale) return;
    if (outcome.refusal) {
      statusLine.textContent = refusalText(outcome.refusal.attained, outcome.refusal.message);
      return;
    }
    if (outcome.reply) {
      statusLine.textContent = `solved (hash ${outcome.reply.hash.slice(0, 12)})`;
      show(outcome.reply.data);
      renderHistory();
    }
  } catch (err) {
    statusLine.textContent = `error: ${(err as Error).message}`;
  } finally {
    solveButton.disabled = false;
  }
}

async function refreshClassification() {
  const raw = Number(aSlider.value);
  const snapped = clampExponent(raw);
  if (snapped !== raw) aSlider.value = String(snapped);
  aValue.textContent = aSlider.value;
  try {
    const reply = await client.classify(aSlider.value);
    banner.textContent = classifyBanner(reply.data).text;
    banner.className = `banner ${reply.data.classification}`;
  } catch (err) {
    banner.textContent = `classification error: ${(err as Error).message}`;
  }
  try {
    const range = await client.rotationRange(Number(aSlider.value));
    rangeLine.textContent =
      `attainable rotation fractions: (${String(range.data.low)}, ${String(range.data.high)})`;
  } catch {
    rangeLine.textContent = "attainable rotation fractions: (rigidity window)";
  }
}

function drawStrip() {
  if (!stripData) return;
  const ctx = context(stripCanvas);
  const rect = stripCanvas.getBoundingClientRect();
  const layout = layoutStrip(stripData, rect.width);
  const colors: Record<string, string> = {
    "local-min": "#c8e6c9",
    "local-max": "#ffe0b2",
    indefinite: "#eceff1",
  };
  for (const band of layout.bands) {
    ctx.fillStyle = colors[band.classification] ?? "#eee";
    ctx.fillRect(band.x0, 8, band.x1 - band.x0, rect.height - 16);
  }
  ctx.fillStyle = "#b0bec5";
  ctx.fillRect(layout.window.x0, 8, layout.window.x1 - layout.window.x0, rect.height - 16);
  ctx.fillStyle = "#c0392b";
  for (const point of layout.points) {
    ctx.beginPath();
    ctx.arc(point.x, rect.height / 2, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
  const slider = Number(aSlider.value);
  const [lo, hi] = layout.domain;
  const x = ((slider - lo) / (hi - lo)) * rect.width;
  ctx.strokeStyle = "#1f3a5f";
  ctx.beginPath();
  ctx.moveTo(x, 4);
  ctx.lineTo(x, rect.height - 4);
  ctx.stroke();
}

async function boot() {
  stripData = (await client.spectrumStrip()).data;
  drawStrip();
  await refreshClassification();

  stripCanvas.addEventListener("click", (event) => {
    if (!stripData) return;
    const rect = stripCanvas.getBoundingClientRect();
    const layout = layoutStrip(stripData, rect.width);
    const picked = pickExponent(layout, event.clientX - rect.left, rect.width);
    aSlider.value = String(picked.a);
    void refreshClassification().then(drawStrip);
  });
  aSlider.addEventListener("input", () => {
    void refreshClassification().then(drawStrip);
  });
  solveButton.addEventListener("click", () => void runSolve());
  showVertices.addEventListener("change", () => lastSolve && drawCurve(lastSolve));
  showConics.addEventListener("change", () => lastSolve && drawCurve(lastSolve));
  showPhase.addEventListener("change", () => lastSolve && drawProfile(lastSolve));
  statusLine.textContent = `connected to ${API_BASE}`;
}

void boot().catch((err) => {
  statusLine.textContent =
    `backend unreachable at ${API_BASE}: ${(err as Error).message} ` +
    "(start it with: centrolab serve)";
});
