"""Request resolution and response building shared by the CLI and service.

Both front ends funnel through these builders, so their numeric output
is identical by construction. Timing lives under ``diagnostics`` and is
the only non-deterministic part of a response.
"""

from __future__ import annotations

import math
import time
from typing import Any

from .errors import LayoutError
from .fom import FomResult, SignalBreakdown, evaluate_grid, evaluate_point, sweep_rect
from .geometry import Layout
from .layoutio import (
    builtin_presets,
    heatmap_to_dict,
    load_layout,
    params_from_preset,
    parse_layout,
)
from .scenario import ScenarioParams, coverage_radii, linear_to_db

DEFAULT_PRESET = "1ghz-75"


def resolve_params(preset: str | None, overrides: dict[str, float] | None = None) -> ScenarioParams:
    return params_from_preset(preset or DEFAULT_PRESET, **(overrides or {}))


def resolve_layout(layout_doc: dict | None, layout_ref: str | None) -> Layout:
    if (layout_doc is None) == (layout_ref is None):
        raise LayoutError("exactly one of layout or layout_ref is required", context="layout")
    if layout_ref is not None:
        return load_layout(layout_ref)
    import json

    return parse_layout(json.dumps(layout_doc))


def params_payload(p: ScenarioParams) -> dict[str, Any]:
    return {
        "db": p.as_db_dict(),
        "linear": {
            "f_c_hz": p.f_c,
            "p_t_w_m2": p.p_t,
            "p_th_w_m2": p.p_th,
            "sigma2_w": p.sigma2,
            "h_t_m": p.h_t,
            "h_r_m": p.h_r,
            "n_l": p.n_l,
            "n_n": p.n_n,
            "lambda_m": p.lam,
        },
    }


def _fom_payload(fr: FomResult) -> dict[str, float]:
    return {
        "g_i": fr.g_i,
        "g_p": fr.g_p,
        "gamma_o": fr.gamma_o,
        "gamma_b": fr.gamma_b,
        "g_i_db": 10.0 * math.log10(fr.g_i),
        "g_p_db": 10.0 * math.log10(fr.g_p),
        "gamma_b_db": 10.0 * math.log10(fr.gamma_b),
    }


def _breakdown_payload(b: SignalBreakdown) -> dict[str, float]:
    out = b.as_dict()
    out["p_b"] = b.p_b
    out["i_b"] = b.i_b
    return out


def build_radii_response(p: ScenarioParams) -> dict[str, Any]:
    radii = coverage_radii(p)
    return {
        "mode": "radii",
        "params": params_payload(p),
        "result": {"r_o_m": radii.r_o, "r_l_m": radii.r_l, "r_n_m": radii.r_n},
    }


def build_point_response(
    layout: Layout, x: float, y: float, p: ScenarioParams, margin: float = 0.05
) -> dict[str, Any]:
    t0 = time.perf_counter()
    breakdown, fr = evaluate_point(layout, (x, y), p, margin=margin)
    elapsed = time.perf_counter() - t0
    return {
        "mode": "point",
        "params": params_payload(p),
        "result": {
            "x_m": x,
            "y_m": y,
            "fom": _fom_payload(fr),
            "breakdown": _breakdown_payload(breakdown),
        },
        "diagnostics": {"timing_ms": elapsed * 1e3, "layout_name": layout.name},
    }


def build_heatmap_response(
    layout: Layout,
    p: ScenarioParams,
    resolution: float = 0.25,
    margin: float = 0.05,
    workers: int = 1,
) -> dict[str, Any]:
    t0 = time.perf_counter()
    grid = evaluate_grid(layout, p, resolution=resolution, margin=margin, workers=workers)
    elapsed = time.perf_counter() - t0
    return {
        "mode": "grid",
        "params": params_payload(p),
        "result": heatmap_to_dict(grid),
        "diagnostics": {
            "timing_ms": elapsed * 1e3,
            "layout_name": layout.name,
            "resolution_m": resolution,
            "margin_m": margin,
        },
    }


def build_sweep_response(
    p: ScenarioParams,
    areas: list[float],
    aspect_ratios: list[float],
    resolution: float = 0.5,
) -> dict[str, Any]:
    t0 = time.perf_counter()
    rows = sweep_rect(areas, aspect_ratios, p, resolution=resolution)
    elapsed = time.perf_counter() - t0
    return {
        "mode": "sweep",
        "params": params_payload(p),
        "result": {
            "rows": [
                {
                    "area_m2": r.area,
                    "aspect_ratio": r.aspect_ratio,
                    "width_m": r.width,
                    "height_m": r.height,
                    "avg_g_i": r.avg_g_i,
                    "avg_g_p": r.avg_g_p,
                    "valid_cells": r.valid_cells,
                }
                for r in rows
            ]
        },
        "diagnostics": {"timing_ms": elapsed * 1e3, "resolution_m": resolution},
    }


def build_presets_response() -> dict[str, Any]:
    return {"mode": "presets", "result": {"presets": builtin_presets(), "default": DEFAULT_PRESET}}


def radii_text(p: ScenarioParams) -> str:
    radii = coverage_radii(p)
    lines = [
        f"R_O = {radii.r_o:.1f} m (open space)",
        f"R_L = {radii.r_l:.1f} m (LOS)",
        f"R_N = {radii.r_n:.1f} m (NLOS)",
    ]
    return "\n".join(lines)


def sweep_text(payload: dict[str, Any]) -> str:
    header = f"{'area[m2]':>9} {'AR':>4} {'width[m]':>9} {'height[m]':>10} {'avg g_I':>10} {'avg g_P':>10}"
    lines = [header]
    for r in payload["result"]["rows"]:
        lines.append(
            f"{r['area_m2']:>9.3g} {r['aspect_ratio']:>4.2g} {r['width_m']:>9.3f} "
            f"{r['height_m']:>10.3f} {r['avg_g_i']:>10.4f} {r['avg_g_p']:>10.4f}"
        )
    return "\n".join(lines)


def params_overrides_from_db(
    f_c_hz: float | None = None,
    p_t_dbw_m2: float | None = None,
    p_th_dbw_m2: float | None = None,
    sigma2_dbw: float | None = None,
    h_t_m: float | None = None,
    h_r_m: float | None = None,
    n_l: float | None = None,
    n_n: float | None = None,
) -> dict[str, float]:
    raw = {
        "f_c_hz": f_c_hz,
        "p_t_dbw_m2": p_t_dbw_m2,
        "p_th_dbw_m2": p_th_dbw_m2,
        "sigma2_dbw": sigma2_dbw,
        "h_t_m": h_t_m,
        "h_r_m": h_r_m,
        "n_l": n_l,
        "n_n": n_n,
    }
    return {k: v for k, v in raw.items() if v is not None}
