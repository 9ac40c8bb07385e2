/**
 * Editor state: the working layout document, tool selection, undo/redo,
 * and the staleness of the last heatmap overlay.
 *
 * Every mutation snapshots the serialized document onto the undo stack,
 * so undo/redo restore byte-identical documents.
 */

import { HeatmapResult } from "./api.js";
import {
  LayoutDocument,
  WallDoc,
  cloneLayout,
  emptyLayout,
  serializeLayout,
  wallLength,
} from "./schema.js";

export type Tool = "draw" | "select" | "probe";

export interface OverlayState {
  grid: HeatmapResult;
  /** serialized document + params key that produced the grid */
  requestKey: string;
  field: "g_i" | "g_p";
}

export class EditorState {
  doc: LayoutDocument;
  tool: Tool = "select";
  preset = "1ghz-75";
  snap = 0.1;
  selectedWallId: string | null = null;
  overlay: OverlayState | null = null;

  private undoStack: string[] = [];
  private redoStack: string[] = [];
  private wallCounter = 0;

  constructor(doc?: LayoutDocument) {
    this.doc = doc ? cloneLayout(doc) : emptyLayout();
    for (const w of this.doc.walls) {
      const m = /^w(\d+)$/.exec(w.id);
      if (m) this.wallCounter = Math.max(this.wallCounter, parseInt(m[1], 10) + 1);
    }
  }

  /** Key identifying the (document, preset) pair an overlay belongs to. */
  requestKey(): string {
    return `${this.preset}\n${serializeLayout(this.doc)}`;
  }

  overlayIsStale(): boolean {
    return this.overlay !== null && this.overlay.requestKey !== this.requestKey();
  }

  setOverlay(grid: HeatmapResult, field: "g_i" | "g_p" = "g_i"): void {
    this.overlay = { grid, requestKey: this.requestKey(), field };
  }

  snapPoint(x: number, y: number): [number, number] {
    const s = this.snap;
    return [Math.round(x / s) * s, Math.round(y / s) * s];
  }

  private checkpoint(): void {
    this.undoStack.push(serializeLayout(this.doc));
    this.redoStack.length = 0;
  }

  canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  canRedo(): boolean {
    return this.redoStack.length > 0;
  }

  undo(): void {
    const prev = this.undoStack.pop();
    if (prev === undefined) return;
    this.redoStack.push(serializeLayout(this.doc));
    this.doc = JSON.parse(prev) as LayoutDocument;
  }

  redo(): void {
    const next = this.redoStack.pop();
    if (next === undefined) return;
    this.undoStack.push(serializeLayout(this.doc));
    this.doc = JSON.parse(next) as LayoutDocument;
  }

  /** Add one wall from a drag gesture; endpoints snap to the grid. */
  addWall(x0: number, y0: number, x1: number, y1: number): WallDoc {
    const [ax, ay] = this.snapPoint(x0, y0);
    const [bx, by] = this.snapPoint(x1, y1);
    const wall: WallDoc = { id: `w${this.wallCounter}`, ax, ay, bx, by };
    if (wallLength(wall) <= 0) {
      throw new Error("zero-length wall rejected");
    }
    this.checkpoint();
    this.wallCounter += 1;
    this.doc.walls.push(wall);
    return wall;
  }

  /** Draw a closed rectangle as four walls. */
  addRectangle(x0: number, y0: number, x1: number, y1: number): WallDoc[] {
    const [ax, ay] = this.snapPoint(Math.min(x0, x1), Math.min(y0, y1));
    const [bx, by] = this.snapPoint(Math.max(x0, x1), Math.max(y0, y1));
    if (bx - ax <= 0 || by - ay <= 0) throw new Error("zero-area rectangle rejected");
    this.checkpoint();
    const corners: [number, number][] = [
      [ax, ay],
      [bx, ay],
      [bx, by],
      [ax, by],
    ];
    const made: WallDoc[] = [];
    for (let i = 0; i < 4; i++) {
      const [sx, sy] = corners[i];
      const [ex, ey] = corners[(i + 1) % 4];
      const wall: WallDoc = { id: `w${this.wallCounter++}`, ax: sx, ay: sy, bx: ex, by: ey };
      this.doc.walls.push(wall);
      made.push(wall);
    }
    return made;
  }

  deleteWall(id: string): void {
    const idx = this.doc.walls.findIndex((w) => w.id === id);
    if (idx < 0) return;
    this.checkpoint();
    this.doc.walls.splice(idx, 1);
    if (this.selectedWallId === id) this.selectedWallId = null;
  }

  /**
   * Drag one wall endpoint; any other wall endpoints that coincided
   * with it move along, keeping connected loops connected.
   */
  moveEndpoint(id: string, which: "a" | "b", x: number, y: number): void {
    const wall = this.doc.walls.find((w) => w.id === id);
    if (!wall) return;
    const [nx, ny] = this.snapPoint(x, y);
    const oldX = which === "a" ? wall.ax : wall.bx;
    const oldY = which === "a" ? wall.ay : wall.by;
    const moved = cloneLayout(this.doc);
    for (const w of moved.walls) {
      if (w.ax === oldX && w.ay === oldY) {
        w.ax = nx;
        w.ay = ny;
      }
      if (w.bx === oldX && w.by === oldY) {
        w.bx = nx;
        w.by = ny;
      }
    }
    if (moved.walls.some((w) => wallLength(w) <= 0)) {
      throw new Error("move would create a zero-length wall");
    }
    this.checkpoint();
    this.doc = moved;
  }

  loadDocument(doc: LayoutDocument): void {
    this.checkpoint();
    this.doc = cloneLayout(doc);
  }
}
