/** Application wiring: canvas events, toolbar, probe readout, overlay. */

import { ApiClient, PointResult, ServiceError } from "./api.js";
import { dbString, metersString, pyFloatRepr } from "./format.js";
import { OverlayImage, overlayImage } from "./overlay.js";
import { drawScene, fitViewport, screenToWorld, Viewport } from "./render.js";
import { parseLayoutDocument, serializeLayout } from "./schema.js";
import { EditorState } from "./state.js";

const SERVICE_URL = (window as { FLOORGAIN_SERVICE?: string }).FLOORGAIN_SERVICE ?? "http://127.0.0.1:8000";

const state = new EditorState();
const api = new ApiClient(SERVICE_URL);

const canvas = document.getElementById("floor") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const readout = document.getElementById("readout")!;
const statusLine = document.getElementById("status")!;
const legendEl = document.getElementById("legend")!;

let viewport: Viewport = fitViewport(state.doc, canvas.width, canvas.height);
let dragStart: [number, number] | null = null;
let dragPreview: [number, number] | null = null;
let probeMark: [number, number] | null = null;
let cachedImage: OverlayImage | null = null;
let drawRectangles = true;

function refit(): void {
  viewport = fitViewport(state.doc, canvas.width, canvas.height);
}

function redraw(): void {
  let overlay;
  if (state.overlay) {
    cachedImage = cachedImage ?? overlayImage(state.overlay.grid, state.overlay.field);
    overlay = {
      image: cachedImage,
      origin: state.overlay.grid.origin,
      cellSize: state.overlay.grid.cell_size,
      stale: state.overlayIsStale(),
    };
    legendEl.textContent =
      `${state.overlay.field === "g_i" ? "interference gain" : "power gain"}: ` +
      `${cachedImage.minDb.toFixed(1)} dB to ${cachedImage.maxDb.toFixed(1)} dB` +
      (state.overlayIsStale() ? " (stale: layout edited)" : "");
  } else {
    legendEl.textContent = "no heatmap yet";
  }
  drawScene(ctx, viewport, state.doc, {
    overlay,
    selectedWallId: state.selectedWallId,
    probe: probeMark,
  });
  if (dragStart && dragPreview) {
    ctx.strokeStyle = "#60a5fa";
    ctx.lineWidth = 2;
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    const [x0, y0] = dragStart;
    const [x1, y1] = dragPreview;
    if (drawRectangles && state.tool === "draw") {
      ctx.strokeRect(Math.min(x0, x1), Math.min(y0, y1), Math.abs(x1 - x0), Math.abs(y1 - y0));
    } else {
      ctx.moveTo(x0, y0);
      ctx.lineTo(x1, y1);
    }
    ctx.stroke();
    ctx.setLineDash([]);
  }
  (document.getElementById("undo") as HTMLButtonElement).disabled = !state.canUndo();
  (document.getElementById("redo") as HTMLButtonElement).disabled = !state.canRedo();
}

function invalidateOverlayImage(): void {
  cachedImage = null;
}

function showPointResult(r: PointResult): void {
  const f = r.fom;
  const b = r.breakdown;
  const rows = [
    ["probe", `${metersString(r.x_m)}, ${metersString(r.y_m)}`],
    ["g_I", `${pyFloatRepr(f.g_i)} (${dbString(f.g_i)})`],
    ["g_P", `${pyFloatRepr(f.g_p)} (${dbString(f.g_p)})`],
    ["gamma_B", `${pyFloatRepr(f.gamma_b)} (${dbString(f.gamma_b)})`],
    ["gamma_O", pyFloatRepr(f.gamma_o)],
    ["P_O / I_O", `${pyFloatRepr(b.p_o)} / ${pyFloatRepr(b.i_o)} W`],
    ["P_L / I_L", `${pyFloatRepr(b.p_l)} / ${pyFloatRepr(b.i_l)} W`],
    ["P_N / I_N", `${pyFloatRepr(b.p_n)} / ${pyFloatRepr(b.i_n)} W`],
  ];
  readout.innerHTML = rows
    .map(([k, v]) => `<div class="row"><span class="key">${k}</span><span class="val">${v}</span></div>`)
    .join("");
}

function showServiceError(err: ServiceError): void {
  if (err.body.error === "NotEnclosed") {
    const dirs = (err.body.gaps_rad ?? [])
      .map(([a, b2]) => `${((a * 180) / Math.PI).toFixed(0)}-${((b2 * 180) / Math.PI).toFixed(0)} deg`)
      .join(", ");
    readout.innerHTML = `<div class="hint">Not enclosed: close the wall gaps toward ${dirs || "the open side"}.</div>`;
  } else if (err.body.error === "ProbeTooClose") {
    readout.innerHTML = `<div class="hint">Probe too close to wall ${err.body.wall_id ?? "?"}; click further inside the room.</div>`;
  } else {
    readout.innerHTML = `<div class="hint">${err.body.error}: ${err.body.message ?? ""}</div>`;
  }
}

canvas.addEventListener("mousedown", (ev) => {
  const rect = canvas.getBoundingClientRect();
  dragStart = [ev.clientX - rect.left, ev.clientY - rect.top];
  dragPreview = dragStart;
});

canvas.addEventListener("mousemove", (ev) => {
  if (!dragStart) return;
  const rect = canvas.getBoundingClientRect();
  dragPreview = [ev.clientX - rect.left, ev.clientY - rect.top];
  redraw();
});

canvas.addEventListener("mouseup", async (ev) => {
  const rect = canvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  const [wx, wy] = screenToWorld(viewport, px, py);
  const start = dragStart;
  dragStart = null;
  dragPreview = null;

  if (state.tool === "probe") {
    probeMark = [wx, wy];
    redraw();
    statusLine.textContent = "evaluating...";
    try {
      const resp = await api.evaluate(state.doc, wx, wy, { preset: state.preset });
      showPointResult(resp.result);
      statusLine.textContent = "ok";
    } catch (err) {
      if (err instanceof ServiceError) showServiceError(err);
      else statusLine.textContent = `service unreachable: ${String(err)}`;
    }
    return;
  }

  if (state.tool === "draw" && start) {
    const [sx, sy] = screenToWorld(viewport, start[0], start[1]);
    try {
      if (drawRectangles) state.addRectangle(sx, sy, wx, wy);
      else state.addWall(sx, sy, wx, wy);
      invalidateOverlayImage();
      statusLine.textContent = "wall added (heatmap stale)";
    } catch (err) {
      statusLine.textContent = String(err);
    }
    refit();
    redraw();
    return;
  }

  if (state.tool === "select") {
    let bestId: string | null = null;
    let bestDist = 12; // px
    for (const w of state.doc.walls) {
      const d = pointSegmentDistancePx(viewport, px, py, w.ax, w.ay, w.bx, w.by);
      if (d < bestDist) {
        bestDist = d;
        bestId = w.id;
      }
    }
    state.selectedWallId = bestId;
    redraw();
  }
});

function pointSegmentDistancePx(
  vp: Viewport,
  px: number,
  py: number,
  ax: number,
  ay: number,
  bx: number,
  by: number,
): number {
  const [sax, say] = [(ax - vp.x0) * vp.scale, vp.heightPx - (ay - vp.y0) * vp.scale];
  const [sbx, sby] = [(bx - vp.x0) * vp.scale, vp.heightPx - (by - vp.y0) * vp.scale];
  const dx = sbx - sax;
  const dy = sby - say;
  const t = Math.max(0, Math.min(1, ((px - sax) * dx + (py - say) * dy) / (dx * dx + dy * dy)));
  return Math.hypot(px - (sax + t * dx), py - (say + t * dy));
}

document.addEventListener("keydown", (ev) => {
  if (ev.key === "Delete" || ev.key === "Backspace") {
    if (state.selectedWallId) {
      state.deleteWall(state.selectedWallId);
      invalidateOverlayImage();
      redraw();
    }
  }
});

for (const tool of ["draw", "select", "probe"] as const) {
  document.getElementById(`tool-${tool}`)!.addEventListener("click", () => {
    state.tool = tool;
    statusLine.textContent = `tool: ${tool}`;
  });
}

document.getElementById("draw-rect")!.addEventListener("change", (ev) => {
  drawRectangles = (ev.target as HTMLInputElement).checked;
});

document.getElementById("undo")!.addEventListener("click", () => {
  state.undo();
  invalidateOverlayImage();
  refit();
  redraw();
});

document.getElementById("redo")!.addEventListener("click", () => {
  state.redo();
  invalidateOverlayImage();
  refit();
  redraw();
});

document.getElementById("heatmap")!.addEventListener("click", async () => {
  statusLine.textContent = "requesting heatmap...";
  const field = (document.getElementById("field") as HTMLSelectElement).value as "g_i" | "g_p";
  try {
    const resp = await api.heatmap(state.doc, 0.25, { preset: state.preset });
    state.setOverlay(resp.result, field);
    invalidateOverlayImage();
    statusLine.textContent = `heatmap: ${resp.result.valid_cells} valid cells`;
    redraw();
  } catch (err) {
    if (err instanceof ServiceError) showServiceError(err);
    else if ((err as Error).name !== "AbortError") statusLine.textContent = String(err);
  }
});

document.getElementById("field")!.addEventListener("change", (ev) => {
  if (state.overlay) {
    state.overlay.field = (ev.target as HTMLSelectElement).value as "g_i" | "g_p";
    invalidateOverlayImage();
    redraw();
  }
});

document.getElementById("export")!.addEventListener("click", () => {
  const blob = new Blob([serializeLayout(state.doc)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `${state.doc.name || "layout"}.json`;
  a.click();
});

document.getElementById("import")!.addEventListener("change", async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    state.loadDocument(parseLayoutDocument(await file.text()));
    invalidateOverlayImage();
    refit();
    redraw();
    statusLine.textContent = `loaded ${state.doc.walls.length} walls`;
  } catch (err) {
    statusLine.textContent = String(err);
  }
});

async function init(): Promise<void> {
  const presetSelect = document.getElementById("preset") as HTMLSelectElement;
  presetSelect.addEventListener("change", () => {
    state.preset = presetSelect.value;
    redraw();
  });
  if (await api.healthz()) {
    const presets = await api.presets();
    presetSelect.innerHTML = Object.keys(presets)
      .sort()
      .map((name) => `<option${name === state.preset ? " selected" : ""}>${name}</option>`)
      .join("");
    statusLine.textContent = `connected to ${SERVICE_URL}`;
  } else {
    statusLine.textContent = `service not reachable at ${SERVICE_URL}; start it with: floorgain serve`;
  }
  redraw();
}

void init();
