"""Layout document schema, parameter presets, and heatmap serialization."""

from __future__ import annotations

import json
import math
import os
from importlib import resources

import numpy as np

from .errors import DegenerateGeometry, LayoutError
from .fom import HeatmapGrid
from .geometry import Layout, Room, WallSegment
from .scenario import ScenarioParams

SCHEMA_VERSION = 1

PRESET_DIR_ENV = "FLOORGAIN_PRESET_DIR"

PRESET_KEYS = (
    "f_c_hz",
    "p_t_dbw_m2",
    "p_th_dbw_m2",
    "sigma2_dbw",
    "h_t_m",
    "h_r_m",
    "n_l",
    "n_n",
)

# CSV numbers use 17 significant digits: enough to round-trip any double.
_FLOAT_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FLOAT_FMT)


def _require(cond: bool, message: str, context: str) -> None:
    if not cond:
        raise LayoutError(message, context=context)


def _get_number(obj: dict, key: str, context: str) -> float:
    _require(key in obj, f"missing field {key!r}", context)
    value = obj[key]
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), "must be a number", f"{context}.{key}")
    _require(math.isfinite(float(value)), "must be finite", f"{context}.{key}")
    return float(value)


def parse_layout(text: str) -> Layout:
    """Parse and validate a layout document; raises LayoutError with context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LayoutError(f"not valid JSON: {exc}", context="document") from exc
    _require(isinstance(doc, dict), "top level must be an object", "document")
    version = doc.get("schema_version")
    _require(version == SCHEMA_VERSION, f"unsupported schema_version {version!r}", "schema_version")
    _require(doc.get("units") == "meters", "units must be 'meters'", "units")
    walls_raw = doc.get("walls")
    _require(isinstance(walls_raw, list) and len(walls_raw) > 0, "must be a non-empty list", "walls")

    walls = []
    ids: set[str] = set()
    for i, w in enumerate(walls_raw):
        ctx = f"walls[{i}]"
        _require(isinstance(w, dict), "must be an object", ctx)
        wid = w.get("id")
        _require(isinstance(wid, str) and wid != "", "missing or empty id", f"{ctx}.id")
        _require(wid not in ids, f"duplicate wall id {wid!r}", f"{ctx}.id")
        ids.add(wid)
        ax = _get_number(w, "ax", ctx)
        ay = _get_number(w, "ay", ctx)
        bx = _get_number(w, "bx", ctx)
        by = _get_number(w, "by", ctx)
        try:
            walls.append(WallSegment(id=wid, a=(ax, ay), b=(bx, by)))
        except DegenerateGeometry as exc:
            raise LayoutError(str(exc), context=ctx) from exc

    rooms = []
    rooms_raw = doc.get("rooms", [])
    _require(isinstance(rooms_raw, list), "must be a list", "rooms")
    room_ids: set[str] = set()
    for i, r in enumerate(rooms_raw):
        ctx = f"rooms[{i}]"
        _require(isinstance(r, dict), "must be an object", ctx)
        rid = r.get("id")
        _require(isinstance(rid, str) and rid != "", "missing or empty id", f"{ctx}.id")
        _require(rid not in room_ids, f"duplicate room id {rid!r}", f"{ctx}.id")
        room_ids.add(rid)
        verts_raw = r.get("vertices")
        _require(isinstance(verts_raw, list) and len(verts_raw) >= 3, "needs >= 3 vertices", f"{ctx}.vertices")
        verts = []
        for j, v in enumerate(verts_raw):
            vctx = f"{ctx}.vertices[{j}]"
            _require(
                isinstance(v, list) and len(v) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v),
                "must be an [x, y] pair",
                vctx,
            )
            verts.append((float(v[0]), float(v[1])))
        try:
            rooms.append(Room(id=rid, vertices=tuple(verts)))
        except DegenerateGeometry as exc:
            raise LayoutError(str(exc), context=ctx) from exc

    name = doc.get("name", "")
    _require(isinstance(name, str), "must be a string", "name")
    return Layout(walls=tuple(walls), rooms=tuple(rooms), name=name)


def layout_to_document(layout: Layout) -> dict:
    """Layout back to its document form (inverse of parse_layout)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "units": "meters",
        "name": layout.name,
        "walls": [
            {"id": w.id, "ax": w.a[0], "ay": w.a[1], "bx": w.b[0], "by": w.b[1]}
            for w in layout.walls
        ],
        "rooms": [
            {"id": r.id, "vertices": [[x, y] for x, y in r.vertices]} for r in layout.rooms
        ],
    }


def builtin_layout_names() -> list[str]:
    root = resources.files("floorgain").joinpath("data/layouts")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_layout(name_or_path: str) -> Layout:
    """Load a layout from a file path or a built-in fixture name."""
    if os.path.exists(name_or_path):
        with open(name_or_path, encoding="utf-8") as fh:
            return parse_layout(fh.read())
    res = resources.files("floorgain").joinpath(f"data/layouts/{name_or_path}.json")
    if res.is_file():
        return parse_layout(res.read_text(encoding="utf-8"))
    raise LayoutError(
        f"no such layout file or fixture {name_or_path!r} "
        f"(fixtures: {', '.join(builtin_layout_names())})",
        context="layout",
    )


def builtin_presets() -> dict[str, dict[str, float]]:
    """Named parameter presets: built-ins plus any *.json in $FLOORGAIN_PRESET_DIR."""
    text = resources.files("floorgain").joinpath("data/presets.json").read_text(encoding="utf-8")
    presets: dict[str, dict[str, float]] = json.loads(text)
    extra_dir = os.environ.get(PRESET_DIR_ENV)
    if extra_dir and os.path.isdir(extra_dir):
        for fname in sorted(os.listdir(extra_dir)):
            if not fname.endswith(".json"):
                continue
            with open(os.path.join(extra_dir, fname), encoding="utf-8") as fh:
                presets.update(json.load(fh))
    return presets


def params_from_preset(name: str, **overrides: float) -> ScenarioParams:
    presets = builtin_presets()
    if name not in presets:
        raise LayoutError(
            f"unknown preset {name!r} (available: {', '.join(sorted(presets))})",
            context="preset",
        )
    cfg = dict(presets[name])
    for key, value in overrides.items():
        if key not in PRESET_KEYS:
            raise LayoutError(f"unknown parameter {key!r}", context="preset")
        if value is not None:
            cfg[key] = value
    return ScenarioParams.from_db(**cfg)


# ---------------------------------------------------------------------------
# heatmap CSV
# ---------------------------------------------------------------------------

_CSV_HEADER = "x_m,y_m,g_i_linear,g_p_linear,g_i_db,g_p_db,gamma_b_db,valid"


def heatmap_to_csv(grid: HeatmapGrid) -> str:
    """Serialize a heatmap grid; cell rows are emitted in scan order."""
    lines = [
        f"# origin_x={_fmt(grid.origin[0])}",
        f"# origin_y={_fmt(grid.origin[1])}",
        f"# cell_size={_fmt(grid.cell_size)}",
        f"# nx={grid.nx}",
        f"# ny={grid.ny}",
        f"# gamma_o={_fmt(grid.gamma_o)}",
        _CSV_HEADER,
    ]
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            x, y = grid.cell_center(ix, iy)
            if grid.is_valid(ix, iy):
                g_i = grid.g_i[iy, ix]
                g_p = grid.g_p[iy, ix]
                gamma_b = grid.gamma_b[iy, ix]
                lines.append(
                    ",".join(
                        (
                            _fmt(x),
                            _fmt(y),
                            _fmt(g_i),
                            _fmt(g_p),
                            _fmt(10.0 * math.log10(g_i)),
                            _fmt(10.0 * math.log10(g_p)),
                            _fmt(10.0 * math.log10(gamma_b)),
                            "1",
                        )
                    )
                )
            else:
                lines.append(",".join((_fmt(x), _fmt(y), "", "", "", "", "", "0")))
    return "\n".join(lines) + "\n"


def heatmap_from_csv(text: str, layout: Layout | None = None) -> HeatmapGrid:
    """Parse a heatmap CSV back into a grid (averages recomputed)."""
    meta: dict[str, float] = {}
    rows: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = float(value)
        elif line != _CSV_HEADER:
            rows.append(line)
    try:
        nx, ny = int(meta["nx"]), int(meta["ny"])
        origin = (meta["origin_x"], meta["origin_y"])
        cell_size = meta["cell_size"]
        gamma_o = meta["gamma_o"]
    except KeyError as exc:
        raise LayoutError(f"heatmap CSV missing metadata {exc}", context="heatmap") from exc
    if len(rows) != nx * ny:
        raise LayoutError(f"expected {nx * ny} cell rows, found {len(rows)}", context="heatmap")
    g_i = np.full((ny, nx), np.nan)
    g_p = np.full((ny, nx), np.nan)
    gamma_b = np.full((ny, nx), np.nan)
    for k, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != 8:
            raise LayoutError(f"bad cell row {k}", context="heatmap")
        iy, ix = divmod(k, nx)
        if parts[7] == "1":
            g_i[iy, ix] = float(parts[2])
            g_p[iy, ix] = float(parts[3])
            gamma_b[iy, ix] = 10.0 ** (float(parts[6]) / 10.0)
    grid = HeatmapGrid(
        origin=origin,
        cell_size=cell_size,
        nx=nx,
        ny=ny,
        g_i=g_i,
        g_p=g_p,
        gamma_b=gamma_b,
        gamma_o=gamma_o,
    )
    if layout is not None:
        from .fom import _fill_averages

        _fill_averages(grid, layout)
    return grid


def heatmap_to_dict(grid: HeatmapGrid) -> dict:
    """Heatmap grid as a JSON-friendly dict (NaN encoded as None)."""

    def cell_list(arr: np.ndarray) -> list[list[float | None]]:
        return [
            [None if not np.isfinite(v) else float(v) for v in arr[iy]]
            for iy in range(arr.shape[0])
        ]

    return {
        "origin": [grid.origin[0], grid.origin[1]],
        "cell_size": grid.cell_size,
        "nx": grid.nx,
        "ny": grid.ny,
        "gamma_o": grid.gamma_o,
        "g_i": cell_list(grid.g_i),
        "g_p": cell_list(grid.g_p),
        "gamma_b": cell_list(grid.gamma_b),
        "room_averages": {
            rid: {"g_i": gi, "g_p": gp} for rid, (gi, gp) in sorted(grid.room_averages.items())
        },
        "global_average": None
        if grid.global_average is None
        else {"g_i": grid.global_average[0], "g_p": grid.global_average[1]},
        "valid_cells": grid.valid_count,
    }


def canonical_json(payload: dict) -> str:
    """Deterministic JSON used by both the CLI and the HTTP service."""
    return json.dumps(payload, sort_keys=True, separators=(", ", ": "), indent=1)
