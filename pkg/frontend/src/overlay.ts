/**
 * Heatmap overlay data layer: grid values to RGBA pixels.
 *
 * Coloring happens in dB on a diverging scale centered at 0 dB (gain of
 * one): blue-ish where the building helps, red-ish where it hurts.
 * Missing cells stay transparent. Kept free of canvas calls so the
 * mapping is testable headlessly.
 */

import { HeatmapResult } from "./api.js";

export interface OverlayImage {
  nx: number;
  ny: number;
  /** RGBA, row-major from the grid's y origin upward */
  pixels: Uint8ClampedArray;
  minDb: number;
  maxDb: number;
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Diverging colormap: t in [-1, 1], negative red, positive blue. */
export function divergingColor(t: number): [number, number, number] {
  const clamped = Math.max(-1, Math.min(1, t));
  if (clamped >= 0) {
    return [
      Math.round(lerp(245, 33, clamped)),
      Math.round(lerp(245, 102, clamped)),
      Math.round(lerp(245, 172, clamped)),
    ];
  }
  return [
    Math.round(lerp(245, 178, -clamped)),
    Math.round(lerp(245, 24, -clamped)),
    Math.round(lerp(245, 43, -clamped)),
  ];
}

export function fieldValues(grid: HeatmapResult, field: "g_i" | "g_p"): (number | null)[][] {
  return field === "g_i" ? grid.g_i : grid.g_p;
}

export function overlayImage(grid: HeatmapResult, field: "g_i" | "g_p"): OverlayImage {
  const values = fieldValues(grid, field);
  let minDb = Infinity;
  let maxDb = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v === null || v <= 0) continue;
      const db = 10 * Math.log10(v);
      if (db < minDb) minDb = db;
      if (db > maxDb) maxDb = db;
    }
  }
  if (!Number.isFinite(minDb)) {
    minDb = 0;
    maxDb = 0;
  }
  const span = Math.max(Math.abs(minDb), Math.abs(maxDb), 1e-9);
  const pixels = new Uint8ClampedArray(grid.nx * grid.ny * 4);
  for (let iy = 0; iy < grid.ny; iy++) {
    for (let ix = 0; ix < grid.nx; ix++) {
      const v = values[iy][ix];
      const off = (iy * grid.nx + ix) * 4;
      if (v === null || v <= 0) {
        pixels[off + 3] = 0;
        continue;
      }
      const db = 10 * Math.log10(v);
      const [r, g, b] = divergingColor(db / span);
      pixels[off] = r;
      pixels[off + 1] = g;
      pixels[off + 2] = b;
      pixels[off + 3] = 210;
    }
  }
  return { nx: grid.nx, ny: grid.ny, pixels, minDb, maxDb };
}
