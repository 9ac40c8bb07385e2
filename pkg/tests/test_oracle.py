"""The quadrature and Monte Carlo oracles themselves."""

import math

import numpy as np
import pytest
from scipy import integrate

import floorgain.closedform as closedform
from floorgain import (
    McSpec,
    NonConvergence,
    QuadratureSpec,
    ScenarioParams,
    ToyModel,
    coverage_radii,
    evaluate_point,
    mc_fom,
    mc_point,
    quad_region,
    rectangle_layout,
    validate,
)
from floorgain.layoutio import load_layout
from floorgain.oracle import quad_full_sector, radial_open
from floorgain.scenario import path_gain_los, path_gain_open


def test_degenerate_region_is_zero(preset_1ghz_75):
    tm = ToyModel(d0=2.0, theta_l=0.4, theta_r=0.4)
    for region in ("PL", "IL", "PN", "IN"):
        assert quad_region(region, tm, preset_1ghz_75) == 0.0


def test_pl_far_wall_equals_disc_sector_integral(preset_1ghz_75):
    # Cross-validate the oracle itself against a plain 1D quadrature of
    # the raw gain model (no reuse of the piecewise antiderivatives).
    p = preset_1ghz_75
    radii = coverage_radii(p)
    tm = ToyModel(d0=2.0 * radii.r_l, theta_l=-0.9, theta_r=0.4)
    ref, _ = integrate.quad(
        lambda r: p.p_t * path_gain_los(r, p) * r, 0.0, radii.r_l,
        points=[p.lam / (4 * math.pi), 1.0], epsabs=1e-16, epsrel=1e-12, limit=300,
    )
    ref *= tm.theta_r - tm.theta_l
    assert quad_region("PL", tm, p, radii) == pytest.approx(ref, rel=1e-10)


def test_region_partition_sums_to_full_sector(preset_1ghz_75):
    p = preset_1ghz_75
    radii = coverage_radii(p)
    for d0, tl, tr in ((0.7, -1.2, 0.3), (2.0, -0.5, 1.1), (4.9, -1.3, 1.3), (8.0, 0.2, 1.0)):
        tm = ToyModel(d0=d0, theta_l=tl, theta_r=tr)
        parts = sum(quad_region(r, tm, p, radii) for r in ("PL", "IL", "PN", "IN"))
        assert parts == pytest.approx(quad_full_sector(tm, p, radii), rel=1e-9)


def test_truncated_in_region_matches_analytic_tail(preset_1ghz_75):
    p = preset_1ghz_75
    radii = coverage_radii(p)
    tm = ToyModel(d0=1.7, theta_l=-0.8, theta_r=0.9)
    exact = quad_region("IN", tm, p, radii)
    truncated = quad_region("IN", tm, p, radii, QuadratureSpec(r_max=1e4 * radii.r_n))
    assert truncated == pytest.approx(exact, rel=1e-10)


def test_quadrature_self_consistency_on_tolerance_halving(preset_1ghz_75):
    p = preset_1ghz_75
    tm = ToyModel(d0=1.3, theta_l=-1.0, theta_r=0.6)
    loose = quad_region("PL", tm, p, spec=QuadratureSpec(rel_tol=1e-8))
    tight = quad_region("PL", tm, p, spec=QuadratureSpec(rel_tol=5e-9))
    assert tight == pytest.approx(loose, rel=1e-8)


def test_unattainable_tolerance_raises(preset_1ghz_75):
    # The threshold splits make every sub-interval smooth, so the budget
    # check only trips when the requested tolerance is below what float64
    # can certify.
    tm = ToyModel(d0=0.4, theta_l=-1.4, theta_r=1.4)
    with pytest.raises(NonConvergence):
        quad_region(
            "IN", tm, preset_1ghz_75,
            spec=QuadratureSpec(rel_tol=1e-16, abs_floor=1e-300, max_subdivisions=1),
        )


def test_r_max_below_radii_rejected(preset_1ghz_75):
    tm = ToyModel(d0=1.0, theta_l=-0.5, theta_r=0.5)
    with pytest.raises(ValueError):
        quad_region("IN", tm, preset_1ghz_75, spec=QuadratureSpec(r_max=1.0))


def test_unknown_region_rejected(preset_1ghz_75):
    with pytest.raises(ValueError):
        quad_region("XX", ToyModel(d0=1.0, theta_l=-0.5, theta_r=0.5), preset_1ghz_75)


class TestMonteCarlo:
    def test_seeded_runs_are_bit_reproducible(self, preset_1ghz_90):
        layout = load_layout("rect_5x10")
        spec = McSpec(samples=200_000, seed=99)
        a = mc_point(layout, (2.0, 4.0), preset_1ghz_90, spec)
        b = mc_point(layout, (2.0, 4.0), preset_1ghz_90, spec)
        assert a.breakdown == b.breakdown
        assert a.stderr == b.stderr
        c = mc_point(layout, (2.0, 4.0), preset_1ghz_90, McSpec(samples=200_000, seed=100))
        assert c.breakdown != a.breakdown

    def test_unbiased_on_wall_free_disc(self, preset_1ghz_90):
        # Far enclosure, small sampling disc: every sample is LOS, so the
        # p_o estimator must match the analytic disc integral within 3
        # standard errors (tails disabled; they assume full coverage).
        p = preset_1ghz_90
        radii = coverage_radii(p)
        side = 20.0 * radii.r_o
        layout = rectangle_layout(side, side)
        probe = (side / 2, side / 2)
        r_disc = 5.0
        assert r_disc < radii.r_o
        est = mc_point(
            layout, probe, p,
            McSpec(samples=500_000, seed=3, r_disc=None, far_field_tail=True),
        )
        # also check a raw truncated run against the disc integral
        raw = mc_point(
            layout, probe, p,
            McSpec(samples=500_000, seed=3, r_disc=r_disc * 10, far_field_tail=False),
        )
        ref, _ = integrate.quad(
            lambda r: p.p_t * path_gain_open(r, p) * r, 0.0, min(r_disc * 10, radii.r_o),
            points=[p.lam / (4 * math.pi)], limit=200,
        )
        ref *= 2.0 * math.pi
        se = raw.component_stderr()["p_o"]
        assert abs(raw.breakdown.p_o - ref) < 3.0 * se
        assert est.breakdown.p_o > 0

    def test_estimates_match_closed_form_within_3_sigma(self, preset_1ghz_90):
        layout = load_layout("rect_5x10")
        probe = (1.5, 3.0)
        b, fr = evaluate_point(layout, probe, preset_1ghz_90)
        est = mc_point(layout, probe, preset_1ghz_90, McSpec(samples=2_000_000, seed=11))
        for name, se in est.component_stderr().items():
            closed = getattr(b, name)
            sampled = getattr(est.breakdown, name)
            if se == 0.0:
                assert closed == pytest.approx(sampled, abs=1e-18)
            else:
                assert abs(closed - sampled) <= 3.0 * se, name
        m = mc_fom(est, preset_1ghz_90)
        assert abs(fr.g_i - m["g_i"]) <= 3.0 * m["g_i_stderr"]
        assert abs(fr.g_p - m["g_p"]) <= 3.0 * m["g_p_stderr"]

    def test_far_field_tail_recorded(self, preset_1ghz_90):
        layout = load_layout("rect_5x10")
        est = mc_point(layout, (2.5, 5.0), preset_1ghz_90, McSpec(samples=100_000, seed=1))
        i_o_tail, i_n_tail = est.tails
        assert i_o_tail > 0 and i_n_tail > 0
        # tails must be consistent with the raw radial integrals
        p = preset_1ghz_90
        assert i_o_tail == pytest.approx(2 * math.pi * radial_open(p, est.r_disc, math.inf), rel=1e-12)

    def test_requires_enclosure(self, preset_1ghz_90):
        from floorgain import NotEnclosed
        from floorgain.geometry import Layout, WallSegment

        lone = Layout(walls=(WallSegment(id="w", a=(0.0, 0.0), b=(4.0, 0.0)),))
        with pytest.raises(NotEnclosed):
            mc_point(lone, (2.0, 2.0), preset_1ghz_90, McSpec(samples=1000))


class TestValidate:
    def test_report_passes_on_rectangle(self, preset_1ghz_90):
        layout = load_layout("rect_5x10")
        report = validate(
            layout,
            preset_1ghz_90,
            probes=[(1.5, 2.5), (3.5, 7.0)],
            mcspec=McSpec(samples=400_000, seed=5),
        )
        assert report.passed
        assert report.probes == 2
        assert max(report.quad_max_rel.values()) < 1e-7
        assert report.speedup > 1.0
        text = report.to_text()
        assert "PASS" in text
        assert "speedup" in text
        payload = report.to_dict()
        assert payload["passed"] is True

    def test_empty_probe_list_fails(self, preset_1ghz_90):
        layout = load_layout("rect_5x10")
        report = validate(layout, preset_1ghz_90, probes=[(-5.0, -5.0)])
        assert not report.passed

    def test_detects_corrupted_dispatch(self, preset_1ghz_90, monkeypatch):
        # Sensitivity check: sabotage the LOS-interference dispatch and
        # the validator must notice.
        layout = load_layout("rect_5x10")
        true_op = closedform.tm_i_l

        def corrupted(tm, p, radii):
            val = true_op(tm, p, radii)
            return val * 1.01 + 1e-12

        monkeypatch.setattr(closedform, "tm_i_l", corrupted)
        report = validate(layout, preset_1ghz_90, probes=[(1.5, 2.5)])
        assert not report.passed
        assert report.quad_max_rel["i_l"] > 1e-7
