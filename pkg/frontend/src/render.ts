/** Canvas drawing: viewport transform, walls, overlay, probe readout. */

import { OverlayImage } from "./overlay.js";
import { LayoutDocument } from "./schema.js";

export interface Viewport {
  /** meters-to-pixels scale */
  scale: number;
  /** world coordinate of the canvas's lower-left corner */
  x0: number;
  y0: number;
  heightPx: number;
}

export function worldToScreen(vp: Viewport, x: number, y: number): [number, number] {
  return [(x - vp.x0) * vp.scale, vp.heightPx - (y - vp.y0) * vp.scale];
}

export function screenToWorld(vp: Viewport, px: number, py: number): [number, number] {
  return [px / vp.scale + vp.x0, (vp.heightPx - py) / vp.scale + vp.y0];
}

export function fitViewport(
  doc: LayoutDocument,
  widthPx: number,
  heightPx: number,
  padMeters = 1.0,
): Viewport {
  let xmin = 0;
  let ymin = 0;
  let xmax = 10;
  let ymax = 10;
  if (doc.walls.length > 0) {
    xmin = Math.min(...doc.walls.flatMap((w) => [w.ax, w.bx]));
    xmax = Math.max(...doc.walls.flatMap((w) => [w.ax, w.bx]));
    ymin = Math.min(...doc.walls.flatMap((w) => [w.ay, w.by]));
    ymax = Math.max(...doc.walls.flatMap((w) => [w.ay, w.by]));
  }
  const scale = Math.min(
    widthPx / (xmax - xmin + 2 * padMeters),
    heightPx / (ymax - ymin + 2 * padMeters),
  );
  return { scale, x0: xmin - padMeters, y0: ymin - padMeters, heightPx };
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  doc: LayoutDocument,
  opts: {
    overlay?: { image: OverlayImage; origin: [number, number]; cellSize: number; stale: boolean };
    selectedWallId?: string | null;
    probe?: [number, number] | null;
    gridStep?: number;
  } = {},
): void {
  const canvas = ctx.canvas;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const step = opts.gridStep ?? 1.0;
  ctx.strokeStyle = "#eeeeee";
  ctx.lineWidth = 1;
  const [wx0, wy1] = screenToWorld(vp, 0, 0);
  const [wx1, wy0] = screenToWorld(vp, canvas.width, canvas.height);
  for (let gx = Math.ceil(wx0 / step) * step; gx <= wx1; gx += step) {
    const [sx] = worldToScreen(vp, gx, 0);
    ctx.beginPath();
    ctx.moveTo(sx, 0);
    ctx.lineTo(sx, canvas.height);
    ctx.stroke();
  }
  for (let gy = Math.ceil(wy0 / step) * step; gy <= wy1; gy += step) {
    const [, sy] = worldToScreen(vp, 0, gy);
    ctx.beginPath();
    ctx.moveTo(0, sy);
    ctx.lineTo(canvas.width, sy);
    ctx.stroke();
  }

  if (opts.overlay) {
    const { image, origin, cellSize, stale } = opts.overlay;
    const off = new OffscreenCanvas(image.nx, image.ny);
    const octx = off.getContext("2d")!;
    const rgba = new Uint8ClampedArray(image.pixels.length);
    rgba.set(image.pixels);
    octx.putImageData(new ImageData(rgba, image.nx, image.ny), 0, 0);
    const [sx, sy] = worldToScreen(vp, origin[0], origin[1] + image.ny * cellSize);
    ctx.save();
    ctx.imageSmoothingEnabled = false;
    if (stale) ctx.globalAlpha = 0.25;
    // the image's first row is the grid's lowest y row; flip vertically
    ctx.translate(sx, sy);
    ctx.scale(1, -1);
    ctx.drawImage(
      off,
      0,
      -image.ny * cellSize * vp.scale,
      image.nx * cellSize * vp.scale,
      image.ny * cellSize * vp.scale,
    );
    ctx.restore();
  }

  for (const w of doc.walls) {
    const [x0, y0] = worldToScreen(vp, w.ax, w.ay);
    const [x1, y1] = worldToScreen(vp, w.bx, w.by);
    ctx.strokeStyle = w.id === opts.selectedWallId ? "#d97706" : "#1f2937";
    ctx.lineWidth = w.id === opts.selectedWallId ? 4 : 2.5;
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
    ctx.stroke();
  }

  if (opts.probe) {
    const [px, py] = worldToScreen(vp, opts.probe[0], opts.probe[1]);
    ctx.strokeStyle = "#dc2626";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(px, py, 6, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(px - 9, py);
    ctx.lineTo(px + 9, py);
    ctx.moveTo(px, py - 9);
    ctx.lineTo(px, py + 9);
    ctx.stroke();
  }
}
