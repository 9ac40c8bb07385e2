"""Acceptance gate: one test per criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
PASS/FAIL lines. The Monte Carlo stage takes a few minutes.
"""

import json
import math
import random
import subprocess
import sys
import time
import urllib.request

import numpy as np
import pytest

from floorgain import (
    McSpec,
    ScenarioParams,
    ToyModel,
    coverage_radii,
    evaluate_grid,
    evaluate_point,
    mc_fom,
    mc_point,
    open_space_powers,
    quad_open_powers,
    quad_region,
    rectangle_layout,
    sweep_rect,
    tm_powers,
    validate,
)
from floorgain.closedform import tm_i_l, tm_i_n, tm_p_l, tm_p_n
from floorgain.geometry import decompose
from floorgain.layoutio import layout_to_document, load_layout, parse_layout
from floorgain.specfun import Z1Args, z0, z1_fn

from test_geometry import oracle_first_hit, tm_owning_azimuth

TWO_PI = 2.0 * math.pi


def report(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" | {detail}"
    print(line)
    assert ok, line


def rel_dev(a: float, b: float, floor: float = 1e-25) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


# ---------------------------------------------------------------------------
# coverage radii
# ---------------------------------------------------------------------------


def test_criterion_coverage_radii():
    t0 = time.perf_counter()
    cases = [
        ("1 GHz / -75", ScenarioParams.from_db(1e9, -30, -75), (4.2, 5.3, 2.5), (0.02, 0.02, 0.02)),
        ("28 GHz / -100", ScenarioParams.from_db(2.8e10, -30, -100), (2.7, 3.2, 1.9), (0.03, 0.03, 0.03)),
        ("1 GHz / -100", ScenarioParams.from_db(1e9, -30, -100), (None, 148.0, 15.0), (None, 0.01, 0.01)),
    ]
    worst = 0.0
    for label, p, expected, tol in cases:
        radii = coverage_radii(p)
        for got, want, t in zip((radii.r_o, radii.r_l, radii.r_n), expected, tol):
            if want is None:
                continue
            worst = max(worst, abs(got - want) / want / t)
            assert abs(got - want) <= t * want, (label, got, want)
    ms = (time.perf_counter() - t0) * 1e3
    report("coverage radii vs published values", True, f"worst at {worst:.2f}x tolerance, {ms:.1f} ms")


# ---------------------------------------------------------------------------
# closed form vs quadrature oracle (toy-model sweep protocol)
# ---------------------------------------------------------------------------


def test_criterion_quadrature_sweep():
    t0 = time.perf_counter()
    worst = {"p_l": 0.0, "i_l": 0.0, "p_n": 0.0, "i_n": 0.0}
    region_of = {"p_l": "PL", "i_l": "IL", "p_n": "PN", "i_n": "IN"}
    for p in (ScenarioParams.from_db(1e9, -30, -75), ScenarioParams.from_db(2.8e10, -30, -100)):
        radii = coverage_radii(p)
        d0s = np.geomspace(0.2, 2.0 * radii.r_l, 22)
        for theta_r in (-0.4, 0.0, 0.4, 1.0):
            for d0 in d0s:
                tm = ToyModel(d0=float(d0), theta_l=-1.0, theta_r=theta_r)
                t = tm_powers(tm, p, radii)
                for name in worst:
                    ref = quad_region(region_of[name], tm, p, radii)
                    worst[name] = max(worst[name], rel_dev(getattr(t, name), ref))
    elapsed = time.perf_counter() - t0
    ok = (
        worst["p_l"] <= 1e-7
        and worst["i_l"] <= 1e-7
        and worst["p_n"] <= 1e-7
        and worst["i_n"] <= 1e-6
    )
    detail = ", ".join(f"{k}={v:.2e}" for k, v in worst.items()) + f", {elapsed:.1f} s"
    assert elapsed < 10.0, f"sweep exceeded 10 s budget: {elapsed:.1f}"
    report("closed form vs quadrature sweep (176 toy models)", ok, detail)


# ---------------------------------------------------------------------------
# closed form vs Monte Carlo (room protocol)
# ---------------------------------------------------------------------------


def _probes_rect():
    return [(0.5 + i * 1.0, 1.0 + j * 2.0) for i in range(4) for j in range(5)]


def _probes_lshape():
    return [(x, y) for x in (1.5, 3.5, 5.5, 7.5, 8.5) for y in (1.5, 2.5, 3.5, 4.2)]


def test_criterion_monte_carlo():
    t0 = time.perf_counter()
    configs = [
        ("rect_5x10", 1e9, -90, _probes_rect()),
        ("rect_5x10", 2.8e10, -100, _probes_rect()),
        ("lshape", 1e9, -90, _probes_lshape()),
        ("lshape", 2.8e10, -100, _probes_lshape()),
    ]
    worst = 0.0
    for name, f_c, p_th, probes in configs:
        layout = load_layout(name)
        p = ScenarioParams.from_db(f_c, -30, p_th)
        assert len(probes) >= 20
        for k, probe in enumerate(probes):
            _, fr = evaluate_point(layout, probe, p)
            est = mc_point(layout, probe, p, McSpec(samples=10_000_000, seed=1000 + k))
            m = mc_fom(est, p)
            z_i = abs(fr.g_i - m["g_i"]) / m["g_i_stderr"]
            z_p = abs(fr.g_p - m["g_p"]) / m["g_p_stderr"]
            worst = max(worst, z_i, z_p)
            assert z_i <= 3.0 and z_p <= 3.0, (name, f_c, probe, z_i, z_p)
    minutes = (time.perf_counter() - t0) / 60.0
    report(
        "closed form vs seeded Monte Carlo (4 rooms x 20 probes, 1e7 samples)",
        True,
        f"worst deviation {worst:.2f} sigma, {minutes:.1f} min",
    )


# ---------------------------------------------------------------------------
# open-space theorem
# ---------------------------------------------------------------------------


def test_criterion_open_space_powers():
    worst = 0.0
    for p in (
        ScenarioParams.from_db(1e9, -30, -75),      # inverse-square regime
        ScenarioParams.from_db(1e9, -30, -110),     # inverse-fourth regime
        ScenarioParams.from_db(2.8e10, -30, -100),
    ):
        osp = open_space_powers(p)
        q_po, q_io = quad_open_powers(p)
        worst = max(worst, rel_dev(osp.p_o, q_po), rel_dev(osp.i_o, q_io))
    assert worst <= 1e-9
    # regime-boundary agreement of the two branch formulas
    h, lam, p_t = 1.2, 3e8 / 1e9, 1e-3
    p_th_star = p_t * lam**4 / ((4 * math.pi) ** 4 * h**4)
    lo = open_space_powers(ScenarioParams(f_c=1e9, p_t=p_t, p_th=p_th_star * (1 + 1e-12), sigma2=0.0))
    hi = open_space_powers(ScenarioParams(f_c=1e9, p_t=p_t, p_th=p_th_star * (1 - 1e-12), sigma2=0.0))
    boundary = max(rel_dev(lo.p_o, hi.p_o), rel_dev(lo.i_o, hi.i_o))
    assert boundary <= 1e-9
    report(
        "open-space powers vs polar quadrature (both regimes)",
        True,
        f"worst rel {worst:.2e}, branch mismatch {boundary:.2e}",
    )


# ---------------------------------------------------------------------------
# property suites (fixed seeds, >= 200 cases each)
# ---------------------------------------------------------------------------


def test_criterion_sector_primitives_match_quadrature():
    from scipy import integrate

    rng = random.Random(404)
    worst = 0.0
    for k in range(200):
        a = rng.uniform(-1.35, 1.3)
        b = rng.uniform(a + 1e-3, 1.35)
        z3 = rng.uniform(0.08, 12.0)
        z4 = rng.uniform(0.08, 12.0)
        z5 = [-1.0, 0.0, 1.0, 0.73, 2.19][k % 5]
        ref, _ = integrate.dblquad(
            lambda r, th: r**-z5, a, b, z3, lambda th: z4 / math.cos(th),
            epsabs=1e-13, epsrel=1e-11,
        )
        worst = max(worst, rel_dev(z1_fn(Z1Args(a, b, z3, z4, z5)), ref, floor=1e-12))
    for k in range(200):
        a = rng.uniform(-1.4, 1.3)
        b = rng.uniform(a, 1.4)
        z3 = rng.uniform(0.05, 10.0)
        z4 = rng.uniform(0.05, 10.0)
        z5 = [1.0, 0.73, 2.19, -0.5, 3.0][k % 5]
        ref, _ = integrate.dblquad(lambda r, th: r**-z5, a, b, z3, z4, epsabs=1e-13, epsrel=1e-11)
        worst = max(worst, rel_dev(z0(a, b, z3, z4, z5), ref, floor=1e-12))
    assert worst <= 1e-8
    report("sector primitives vs 2D quadrature (400 cases)", True, f"worst rel {worst:.2e}")


def test_criterion_z1_symmetries():
    rng = random.Random(505)
    worst = 0.0
    for k in range(200):
        z3 = rng.uniform(0.1, 8.0)
        z4 = rng.uniform(0.1, 8.0)
        z5 = [-1.0, 0.0, 1.0, 0.73, 2.19][k % 5]
        a, b, c = sorted(rng.uniform(-1.3, 1.3) for _ in range(3))
        whole = z1_fn(Z1Args(a, c, z3, z4, z5))
        parts = z1_fn(Z1Args(a, b, z3, z4, z5)) + z1_fn(Z1Args(b, c, z3, z4, z5))
        worst = max(worst, abs(parts - whole) / max(abs(whole), 1e-12))
        mirrored = z1_fn(Z1Args(-c, -a, z3, z4, z5))
        worst = max(worst, abs(mirrored - whole) / max(abs(whole), 1e-12))
    assert worst <= 1e-10
    report("sector integral additivity and mirror symmetry (200 cases)", True, f"worst rel {worst:.2e}")


def test_criterion_case_boundary_continuity():
    # Richardson jump extraction: diff(delta/10) - diff(delta)/10 cancels
    # smooth slope and keeps 0.9x any genuine jump.
    ops = (tm_p_l, tm_i_l, tm_p_n, tm_i_n)
    rng = random.Random(606)
    p = ScenarioParams.from_db(1e9, -30, -75)
    radii = coverage_radii(p)
    delta = 1e-6
    worst = 0.0
    cases = 0
    while cases < 200:
        tl = rng.uniform(-1.4, 0.4)
        tr = rng.uniform(tl + 0.2, 1.44)
        kind = cases % 7
        if kind < 3:  # d0 boundary crossings
            d0_star = (1.0, radii.r_l, radii.r_n)[kind]
            make = lambda eps: ToyModel(d0=d0_star + eps, theta_l=tl, theta_r=tr)
        else:  # theta boundary crossings at the four thresholds
            d0 = rng.uniform(0.3, 0.95) if kind >= 5 else rng.uniform(1.05, radii.r_n * 0.98)
            names = [math.acos(d0 / radii.r_l), math.acos(d0 / radii.r_n)]
            if d0 < 1.0:
                names.append(math.acos(d0))
            t_star = names[kind % len(names)] * rng.choice([-1.0, 1.0])
            if not (tl + delta * 20 < t_star < 1.44):
                continue
            make = lambda eps: ToyModel(d0=d0, theta_l=tl, theta_r=t_star + eps)
        for op in ops:
            diff_1 = op(make(delta), p, radii) - op(make(-delta), p, radii)
            diff_01 = op(make(delta / 10), p, radii) - op(make(-delta / 10), p, radii)
            t = tm_powers(make(delta), p, radii)
            scale = max(t.p_l + t.i_l + t.p_n + t.i_n, 1e-22)
            worst = max(worst, abs(diff_01 - diff_1 / 10.0) / 0.9 / scale)
        cases += 1
    assert worst <= 1e-6
    report("toy-model case-boundary continuity (200 cases)", True, f"worst jump {worst:.2e} rel")


def test_criterion_geometry_ray_oracle():
    rng = random.Random(707)
    total = agreed = 0
    for fixture in ("lshape", "office_a1", "rect_5x10"):
        layout = load_layout(fixture)
        xmin, ymin, xmax, ymax = layout.bounds
        probes = 0
        while probes < 7:
            probe = (rng.uniform(xmin + 0.3, xmax - 0.3), rng.uniform(ymin + 0.3, ymax - 0.3))
            try:
                d = decompose(layout, probe)
            except Exception:
                continue
            probes += 1
            for _ in range(360):
                az = rng.uniform(0.0, TWO_PI)
                t_hit, idx = oracle_first_hit(layout, probe, az)
                tm = tm_owning_azimuth(d, az)
                if tm is not None:
                    rel = (az - tm.phi_perp + math.pi) % TWO_PI - math.pi
                    if min(abs(rel - tm.theta_l), abs(rel - tm.theta_r)) < 1e-9:
                        continue  # hairline of an event boundary
                total += 1
                if idx is None:
                    agreed += tm is None
                    continue
                if tm is None:
                    continue
                expected = layout.walls[idx]
                wall = next(w for w in layout.walls if w.id == tm.wall_id)
                same_line = all(
                    abs((wall.b[0] - wall.a[0]) * (py - wall.a[1]) - (wall.b[1] - wall.a[1]) * (px - wall.a[0])) < 1e-9
                    for px, py in (expected.a, expected.b)
                )
                agreed += (wall.id == expected.id) or same_line
    assert total >= 7000
    ok = agreed == total
    report("nearest-wall decomposition vs ray casting", ok, f"{agreed}/{total} rays agree")


def test_criterion_noise_free_rescaling():
    layout = load_layout("lshape")
    rng = random.Random(808)
    worst = 0.0
    cases = 0
    while cases < 200:
        probe = (rng.uniform(0.3, 9.7), rng.uniform(0.3, 9.7))
        scale = 10.0 ** rng.uniform(-2.0, 2.0)
        base = ScenarioParams(f_c=1e9, p_t=1e-3, p_th=1e-9, sigma2=0.0)
        scaled = ScenarioParams(f_c=1e9, p_t=1e-3 * scale, p_th=1e-9 * scale, sigma2=0.0)
        try:
            _, f1 = evaluate_point(layout, probe, base)
            _, f2 = evaluate_point(layout, probe, scaled)
        except Exception:
            continue
        cases += 1
        worst = max(worst, rel_dev(f1.g_i, f2.g_i), rel_dev(f1.g_p, f2.g_p))
    assert worst <= 1e-12
    report("noise-free power-rescaling invariance (200 cases)", True, f"worst rel {worst:.2e}")


# ---------------------------------------------------------------------------
# room-size regimes
# ---------------------------------------------------------------------------


def test_criterion_small_room_constant_interference_gain():
    p = ScenarioParams.from_db(1e9, -30, -100)
    radii = coverage_radii(p)
    assert radii.r_n == pytest.approx(15.0, rel=0.01)
    rows = sweep_rect([10.0, 20.0, 35.0, 50.0], [1.0, 2.0], p, resolution=0.5)
    for row in rows:
        assert math.hypot(row.width, row.height) < radii.r_n
    g_is = [row.avg_g_i for row in rows]
    spread = (max(g_is) - min(g_is)) / min(g_is)
    ok = spread <= 0.01
    report(
        "sub-NLOS-radius rooms have constant interference gain",
        ok,
        f"spread {spread:.2e} over {len(rows)} rooms",
    )


def test_criterion_aspect_ratio_lowers_peak_gain():
    p = ScenarioParams.from_db(1e9, -30, -75)
    areas = [5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0]
    rows = sweep_rect(areas, [1.0, 2.0], p, resolution=0.5)
    best = {1.0: 0.0, 2.0: 0.0}
    for row in rows:
        best[row.aspect_ratio] = max(best[row.aspect_ratio], row.avg_g_i)
    ok = best[1.0] > best[2.0]
    report(
        "peak interference gain decreases with aspect ratio",
        ok,
        f"max avg g_I: AR1 {best[1.0]:.3f} vs AR2 {best[2.0]:.3f}",
    )


def test_criterion_office_frequency_tradeoff():
    # Exact reproduction of the published office averages is out of
    # reach (the reference geometry is external); the shipped fixture
    # must reproduce the qualitative frequency tradeoff.
    layout = load_layout("office_a1")
    p1 = ScenarioParams.from_db(1e9, -30, -100)
    p28 = ScenarioParams.from_db(2.8e10, -30, -100)
    g1 = evaluate_grid(layout, p1, resolution=1.0).global_average
    g28 = evaluate_grid(layout, p28, resolution=1.0).global_average
    ok = g1[0] > g28[0] and g28[1] > g1[1]
    report(
        "office fixture frequency tradeoff (g_I favors 1 GHz, g_P favors 28 GHz)",
        ok,
        f"g_I {g1[0]:.2f} vs {g28[0]:.2f}; g_P {g1[1]:.2f} vs {g28[1]:.2f}",
    )


# ---------------------------------------------------------------------------
# performance
# ---------------------------------------------------------------------------


def test_criterion_speedup_over_monte_carlo():
    layout = load_layout("office_a1")
    p = ScenarioParams.from_db(1e9, -30, -100)
    report_obj = validate(
        layout,
        p,
        probes=[(5.0, 5.0), (25.0, 12.5)],
        mcspec=McSpec(samples=10_000_000, seed=42),
    )
    ok = report_obj.passed and report_obj.speedup >= 100.0
    report(
        "closed form at least 100x faster than 1e7-sample Monte Carlo",
        ok,
        f"speedup {report_obj.speedup:.0f}x "
        f"({report_obj.closed_form_ms:.2f} ms vs {report_obj.mc_ms:.0f} ms per point)",
    )


# ---------------------------------------------------------------------------
# secondary: service-side contract for the browser editor
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def live_server():
    port = 8753
    proc = subprocess.Popen(
        [sys.executable, "-m", "floorgain.cli", "serve", "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                with urllib.request.urlopen(f"{base}/healthz", timeout=1) as r:
                    if r.read() == b"ok":
                        break
            except Exception:
                time.sleep(0.1)
        else:
            raise RuntimeError("service did not come up")
        yield base
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def _post(base: str, path: str, payload: dict) -> tuple[int, dict]:
    req = urllib.request.Request(
        base + path,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req, timeout=30) as r:
        return r.status, json.loads(r.read())


def test_secondary_service_grid_under_one_second(live_server):
    # ~2500 cells over the office fixture, matching the editor's
    # interactive heatmap request.
    payload = {
        "layout_ref": "office_a1",
        "params": {"preset": "1ghz-100"},
        "resolution": 0.705,
    }
    status, body = _post(live_server, "/api/heatmap", payload)  # warm the JIT
    assert status == 200
    t0 = time.perf_counter()
    status, body = _post(live_server, "/api/heatmap", payload)
    elapsed = time.perf_counter() - t0
    cells = body["result"]["nx"] * body["result"]["ny"]
    ok = status == 200 and cells >= 2500 and elapsed < 1.0
    report(
        "service heatmap round trip (>= 2500 cells) under 1 s",
        ok,
        f"{cells} cells in {elapsed * 1e3:.0f} ms",
    )


def test_secondary_layout_export_import_roundtrip():
    for fixture in ("rect_5x10", "lshape", "office_a1"):
        layout = load_layout(fixture)
        doc = layout_to_document(layout)
        again = parse_layout(json.dumps(doc))
        assert layout_to_document(again) == doc
    report("layout export/import round trip is lossless", True, "3 fixtures")
