"""Special functions against independent series/quadrature oracles."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from floorgain.specfun import Z1Args, beta_fn, hyp2f1, im_li2_on_circle, z0, z1_fn

CATALAN = 0.915965594177219015054603514932384110774


def series_2f1(a, b, c, z, cutoff=1e-14):
    """Independent oracle: plain Gauss series with a term cutoff."""
    term, total = 1.0, 1.0
    for n in range(100_000):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if abs(term) < cutoff:
            return total
    raise AssertionError("oracle series did not converge")


def quad_z1(z1, z2, z3, z4, z5):
    """Brute-force 2D quadrature of the wall-bounded sector integral."""
    val, err = integrate.dblquad(
        lambda r, th: r**-z5,
        z1,
        z2,
        z3,
        lambda th: z4 / math.cos(th),
        epsabs=1e-13,
        epsrel=1e-11,
    )
    return val


class TestBeta:
    def test_unit_square(self):
        assert beta_fn(1.0, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_half_half_is_pi(self):
        assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)

    def test_against_integral_oracle(self):
        # B(1/2, z5/2) for the LOS exponent path, z5 = 0.73. The algebraic
        # endpoint singularities go into the quadrature weight.
        x, y = 0.5, 0.365
        ref, err = integrate.quad(
            lambda t: 1.0, 0.0, 1.0, weight="alg", wvar=(x - 1.0, y - 1.0),
            epsabs=1e-14, epsrel=1e-13, limit=500,
        )
        assert err < 1e-12 * abs(ref)
        assert beta_fn(x, y) == pytest.approx(ref, rel=1e-12)

    def test_domain_errors(self):
        for x, y in ((0.0, 1.0), (1.0, 0.0), (-0.5, 1.0)):
            with pytest.raises(ValueError):
                beta_fn(x, y)


class TestHyp2f1:
    def test_value_at_zero_is_one(self):
        for a, b, c in ((0.365, 0.5, 1.365), (1.095, 0.5, 2.095), (2.0, 3.0, 4.5)):
            assert hyp2f1(a, b, c, 0.0) == 1.0

    def test_series_cross_check_z5_219(self):
        a, b, c = 2.19 / 2, 0.5, (2.19 + 2) / 2
        assert hyp2f1(a, b, c, 0.25) == pytest.approx(series_2f1(a, b, c, 0.25), rel=1e-13)

    def test_near_one_matches_euler_integral(self):
        # 2F1(a,b;c;z) = 1/B(b,c-b) * int_0^1 x^(b-1)(1-x)^(c-b-1)(1-zx)^-a dx
        a, b, c = 2.19 / 2, 0.5, (2.19 + 2) / 2
        z = 0.999999
        ref, _ = integrate.quad(
            lambda x: x ** (b - 1.0) * (1.0 - x) ** (c - b - 1.0) * (1.0 - z * x) ** (-a),
            0.0,
            1.0,
            epsabs=1e-15,
            epsrel=1e-12,
            limit=500,
        )
        ref /= beta_fn(b, c - b)
        assert hyp2f1(a, b, c, z) == pytest.approx(ref, rel=1e-10)

    def test_transform_region_against_series(self):
        # direct series still converges (slowly) below 1; use it as oracle
        a, b, c = 0.365, 0.5, 1.365
        for z in (0.76, 0.9, 0.97):
            assert hyp2f1(a, b, c, z) == pytest.approx(series_2f1(a, b, c, z), rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            hyp2f1(0.5, 0.5, 1.5, 1.0)
        with pytest.raises(ValueError):
            hyp2f1(0.5, 0.5, 1.5, -0.1)
        with pytest.raises(ValueError):
            hyp2f1(0.5, 0.5, 0.0, 0.5)


class TestClausen:
    def test_zeros(self):
        assert im_li2_on_circle(0.0) == 0.0
        assert abs(im_li2_on_circle(math.pi)) < 1e-15

    def test_catalan_at_half_pi(self):
        # Oracle: direct sine series; alternating at pi/2 so the tail is
        # bounded by the last term.
        k = np.arange(1, 2_000_001, dtype=float)
        ref = float(np.sum(np.sin(k * math.pi / 2) / k**2))
        assert abs(ref - CATALAN) < 1e-12
        assert im_li2_on_circle(math.pi / 2) == pytest.approx(CATALAN, abs=1e-13)

    @given(st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_oddness_exact(self, phi):
        assert im_li2_on_circle(-phi) == -im_li2_on_circle(phi)

    def test_periodicity(self):
        for phi in (0.3, 1.9, 2.7):
            assert im_li2_on_circle(phi + 2 * math.pi) == pytest.approx(
                im_li2_on_circle(phi), abs=1e-12
            )


class TestZ0:
    def test_empty_radial_interval(self):
        assert z0(0.1, 0.9, 3.0, 3.0, 1.73) == 0.0

    def test_log_case(self):
        assert z0(0.0, 1.0, 1.0, math.e, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_against_double_quadrature(self):
        rng = random.Random(2024)
        for _ in range(40):
            a = rng.uniform(-1.4, 1.3)
            b = rng.uniform(a, 1.4)
            z3 = rng.uniform(0.05, 10.0)
            z4 = rng.uniform(0.05, 10.0)
            z5 = rng.choice([1.0, 0.73, 2.19, -0.5, 3.0])
            ref, _ = integrate.dblquad(
                lambda r, th: r**-z5, a, b, z3, z4, epsabs=1e-13, epsrel=1e-11
            )
            assert z0(a, b, z3, z4, z5) == pytest.approx(ref, rel=1e-9, abs=1e-14)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            z0(1.0, 0.0, 1.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            z0(0.0, 1.0, 0.0, 2.0, 1.0)


class TestZ1:
    def test_empty_angular_interval(self):
        assert z1_fn(Z1Args(0.4, 0.4, 1.0, 2.0, 0.73)) == 0.0

    def test_printed_inverse_case(self):
        # z5 = -1 with unit radii: 0.5*tan(pi/4) - pi/8
        val = z1_fn(Z1Args(0.0, math.pi / 4, 1.0, 1.0, -1.0))
        assert val == pytest.approx(0.5 - math.pi / 8, rel=1e-14)

    def test_random_tuples_match_quadrature(self):
        # All four exponent cases, including the two indoor exponents.
        rng = random.Random(7)
        exponents = [-1.0, 0.0, 1.0, 0.73, 2.19, 0.4, 2.8]
        checked = 0
        while checked < 200:
            z5 = exponents[checked % len(exponents)]
            a = rng.uniform(-1.35, 1.3)
            b = rng.uniform(a + 1e-3, 1.35)
            z3 = rng.uniform(0.08, 12.0)
            z4 = rng.uniform(0.08, 12.0)
            ref = quad_z1(a, b, z3, z4, z5)
            val = z1_fn(Z1Args(a, b, z3, z4, z5))
            assert val == pytest.approx(ref, rel=1e-8, abs=1e-13), (z5, a, b, z3, z4)
            checked += 1

    def test_infinite_inner_radius_limit(self):
        # z3 -> inf drops the inner-radius term; cross-check against a
        # very large finite z3.
        args_inf = Z1Args(-0.7, 0.9, math.inf, 2.5, 2.19)
        val_inf = z1_fn(args_inf)
        val_big = z1_fn(Z1Args(-0.7, 0.9, 1e12, 2.5, 2.19))
        assert val_inf == pytest.approx(val_big, abs=1e-12)
        with pytest.raises(ValueError):
            Z1Args(-0.7, 0.9, math.inf, 2.5, 0.73)  # diverges for z5 <= 1

    @given(
        st.floats(min_value=-1.3, max_value=1.3),
        st.floats(min_value=-1.3, max_value=1.3),
        st.floats(min_value=-1.3, max_value=1.3),
        st.floats(min_value=0.1, max_value=8.0),
        st.floats(min_value=0.1, max_value=8.0),
        st.sampled_from([-1.0, 0.0, 1.0, 0.73, 2.19]),
    )
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_angular_additivity(self, t0, t1, t2, z3, z4, z5):
        a, b, c = sorted((t0, t1, t2))
        whole = z1_fn(Z1Args(a, c, z3, z4, z5))
        parts = z1_fn(Z1Args(a, b, z3, z4, z5)) + z1_fn(Z1Args(b, c, z3, z4, z5))
        assert parts == pytest.approx(whole, rel=1e-10, abs=1e-13)

    @given(
        st.floats(min_value=-1.3, max_value=1.3),
        st.floats(min_value=-1.3, max_value=1.3),
        st.floats(min_value=0.1, max_value=8.0),
        st.floats(min_value=0.1, max_value=8.0),
        st.sampled_from([-1.0, 0.0, 1.0, 0.73, 2.19]),
    )
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_mirror_symmetry(self, t0, t1, z3, z4, z5):
        a, b = sorted((t0, t1))
        direct = z1_fn(Z1Args(a, b, z3, z4, z5))
        mirrored = z1_fn(Z1Args(-b, -a, z3, z4, z5))
        assert mirrored == pytest.approx(direct, rel=1e-10, abs=1e-13)

    def test_continuity_across_zero_angle(self):
        # Pins sgn(0) := 0: the value at an endpoint exactly 0 must be
        # the limit from both sides.
        for z5 in (0.73, 2.19):
            at_zero = z1_fn(Z1Args(0.0, 1.0, 2.0, 3.0, z5))
            deltas = [1e-4, 1e-6, 1e-8]
            gaps = [abs(z1_fn(Z1Args(-d, 1.0, 2.0, 3.0, z5)) - at_zero) for d in deltas]
            gaps_pos = [abs(z1_fn(Z1Args(d, 1.0, 2.0, 3.0, z5)) - at_zero) for d in deltas]
            assert gaps[0] > gaps[1] > gaps[2]
            assert gaps_pos[0] > gaps_pos[1] > gaps_pos[2]
            assert gaps[2] < 1e-7 and gaps_pos[2] < 1e-7

    def test_angle_guard(self):
        with pytest.raises(ValueError):
            z1_fn(Z1Args(0.0, math.pi / 2 - 1e-12, 1.0, 2.0, 0.73))

    def test_invariant_violations(self):
        with pytest.raises(ValueError):
            Z1Args(0.5, 0.4, 1.0, 2.0, 0.73)  # z1 > z2
        with pytest.raises(ValueError):
            Z1Args(0.0, 0.4, -1.0, 2.0, 0.73)  # z3 <= 0
        with pytest.raises(ValueError):
            Z1Args(0.0, 0.4, 1.0, -2.0, 0.73)  # z4 <= 0
        with pytest.raises(ValueError):
            Z1Args(0.0, 0.4, 1.0, 2.0, -1.5)  # z5 < -1
        with pytest.raises(ValueError):
            Z1Args(-2.0, 0.4, 1.0, 2.0, 0.73)  # angle out of range
