/** Layout document schema shared with the evaluation service. */

export interface WallDoc {
  id: string;
  ax: number;
  ay: number;
  bx: number;
  by: number;
}

export interface RoomDoc {
  id: string;
  vertices: [number, number][];
}

export interface LayoutDocument {
  schema_version: 1;
  units: "meters";
  name: string;
  walls: WallDoc[];
  rooms: RoomDoc[];
}

export function emptyLayout(name = "untitled"): LayoutDocument {
  return { schema_version: 1, units: "meters", name, walls: [], rooms: [] };
}

export function wallLength(w: WallDoc): number {
  return Math.hypot(w.bx - w.ax, w.by - w.ay);
}

/** Structural validation mirroring the service's parse_layout checks. */
export function validateLayoutDocument(doc: unknown): asserts doc is LayoutDocument {
  const d = doc as Record<string, unknown>;
  if (typeof d !== "object" || d === null) throw new Error("document: must be an object");
  if (d.schema_version !== 1) throw new Error("schema_version: unsupported");
  if (d.units !== "meters") throw new Error("units: must be 'meters'");
  if (!Array.isArray(d.walls)) throw new Error("walls: must be a list");
  const seen = new Set<string>();
  d.walls.forEach((w: WallDoc, i: number) => {
    for (const k of ["ax", "ay", "bx", "by"] as const) {
      if (typeof w[k] !== "number" || !Number.isFinite(w[k])) {
        throw new Error(`walls[${i}].${k}: must be a finite number`);
      }
    }
    if (typeof w.id !== "string" || w.id === "") throw new Error(`walls[${i}].id: missing`);
    if (seen.has(w.id)) throw new Error(`walls[${i}].id: duplicate '${w.id}'`);
    seen.add(w.id);
    if (wallLength(w) <= 0) throw new Error(`walls[${i}]: zero length`);
  });
  if (d.rooms !== undefined && !Array.isArray(d.rooms)) throw new Error("rooms: must be a list");
}

/**
 * Canonical serialization: stable field order and shortest-round-trip
 * numbers, so export -> import -> export is byte identical.
 */
export function serializeLayout(doc: LayoutDocument): string {
  const ordered = {
    schema_version: doc.schema_version,
    units: doc.units,
    name: doc.name,
    walls: doc.walls.map((w) => ({ id: w.id, ax: w.ax, ay: w.ay, bx: w.bx, by: w.by })),
    rooms: (doc.rooms ?? []).map((r) => ({ id: r.id, vertices: r.vertices })),
  };
  return JSON.stringify(ordered, null, 1);
}

export function parseLayoutDocument(text: string): LayoutDocument {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new Error(`document: not valid JSON (${String(e)})`);
  }
  validateLayoutDocument(doc);
  const d = doc as LayoutDocument;
  return { ...d, name: d.name ?? "", rooms: d.rooms ?? [] };
}

export function cloneLayout(doc: LayoutDocument): LayoutDocument {
  return JSON.parse(serializeLayout(doc)) as LayoutDocument;
}
