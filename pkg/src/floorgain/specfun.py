"""Special functions and the two sector-integral primitives.

``z0`` integrates R^-z5 over a plain angular-radial box; ``z1_fn``
integrates it between a fixed inner radius and the polar trace of a
straight wall, R = z4/cos(theta). Everything downstream reduces to
these two primitives plus the Gauss hypergeometric function and the
imaginary part of the dilogarithm on the unit circle.

The scalar kernels are accelerated with numba when it is importable;
the pure-Python definitions are the reference behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = math.pi / 2.0

# Angles this close to +-pi/2 make sec/tan overflow; valid wall geometry
# never produces them because a chord is always seen strictly within
# +-pi/2 of its perpendicular.
ANGLE_GUARD = 1e-9

# Window for matching the special-case exponents of z1_fn/z0 so that
# values within float noise of -1, 0, 1 do not hit the removable
# singularities of the general formula.
_CASE_EPS = 1e-12

_SERIES_TOL = 1e-16
_SERIES_MAX_TERMS = 600

# zeta(2k) for k = 1..40, used by the accelerated Clausen series.
_ZETA_EVEN = np.empty(40)
_ZETA_EVEN[0] = math.pi**2 / 6.0
_ZETA_EVEN[1] = math.pi**4 / 90.0
_ZETA_EVEN[2] = math.pi**6 / 945.0
for _k in range(4, 41):
    _ZETA_EVEN[_k - 1] = sum(n ** (-2.0 * _k) for n in range(1, 80))
del _k


def _gauss_series(a: float, b: float, c: float, z: float) -> float:
    term = 1.0
    s = 1.0
    for n in range(_SERIES_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        s += term
        if abs(term) <= _SERIES_TOL * abs(s):
            return s
    return math.nan


def _hyp2f1_raw(a: float, b: float, c: float, z: float) -> float:
    # Plain series converges adequately up to z = 0.75; beyond that the
    # 1-z linear transformation keeps the argument small. The transform
    # needs c-a-b away from the integers (gamma poles); in the rare
    # integer case fall back to the slow direct series.
    if z <= 0.75:
        return _gauss_series(a, b, c, z)
    d = c - a - b
    if abs(d - round(d)) < 1e-9:
        return _gauss_series(a, b, c, z)
    w = 1.0 - z
    coef1 = math.gamma(c) * math.gamma(d) / (math.gamma(c - a) * math.gamma(c - b))
    coef2 = math.gamma(c) * math.gamma(-d) / (math.gamma(a) * math.gamma(b))
    return coef1 * _gauss_series(a, b, 1.0 - d, w) + coef2 * w**d * _gauss_series(
        c - a, c - b, 1.0 + d, w
    )


def _cl2_raw(phi: float) -> float:
    # Clausen function Cl2. Reduce to (-pi, pi]; exact oddness; then the
    # zeta-accelerated series, whose ratio is (phi/2pi)^2 <= 1/4.
    x = phi % (2.0 * math.pi)
    if x > math.pi:
        x -= 2.0 * math.pi
    if x == 0.0:
        return 0.0
    sign = 1.0
    if x < 0.0:
        sign = -1.0
        x = -x
    acc = 1.0 - math.log(x)
    ratio = (x / (2.0 * math.pi)) ** 2
    power = 1.0
    for k in range(1, 41):
        power *= ratio
        term = _ZETA_EVEN[k - 1] * power / (k * (2.0 * k + 1.0))
        acc += term
        if term < 1e-17 * abs(acc):
            break
    return sign * x * acc


def _sgn(x: float) -> float:
    # sgn(0) = 0 keeps the general z1 formula continuous as an angular
    # endpoint crosses zero (the beta and hypergeometric jumps cancel).
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def _z1_general_raw(z1: float, z2: float, z3: float, z4: float, z5: float) -> float:
    # General exponent case. Signed gamma product: for z5 in (-1, 0) the
    # beta factor B(1/2, z5/2) is negative and the sign must be kept.
    bcoef = math.gamma(0.5) * math.gamma(z5 / 2.0) / math.gamma((z5 + 1.0) / 2.0)
    one_m = 1.0 - z5
    a = z5 / 2.0
    c = (z5 + 2.0) / 2.0
    c1 = math.cos(z1)
    c2 = math.cos(z2)
    t1 = bcoef * (_sgn(z2) - _sgn(z1)) * z4**one_m / (2.0 * one_m)
    if math.isinf(z3):
        t2 = 0.0
    else:
        t2 = (z1 - z2) * z3**one_m / one_m
    t3 = (
        z4**one_m
        / (one_m * z5)
        * (
            _sgn(z1) * c1**z5 * _hyp2f1_raw(a, 0.5, c, c1 * c1)
            - _sgn(z2) * c2**z5 * _hyp2f1_raw(a, 0.5, c, c2 * c2)
        )
    )
    return t1 + t2 + t3


try:  # optional JIT acceleration of the scalar kernels
    from numba import njit as _njit

    _gauss_series = _njit(cache=True)(_gauss_series)
    _hyp2f1_raw = _njit(cache=True)(_hyp2f1_raw)
    _cl2_raw = _njit(cache=True)(_cl2_raw)
    _sgn = _njit(cache=True)(_sgn)
    _z1_general_raw = _njit(cache=True)(_z1_general_raw)
except ImportError:  # pragma: no cover
    pass


def beta_fn(x: float, y: float) -> float:
    """Euler beta function B(x, y) for positive arguments."""
    if x <= 0.0 or y <= 0.0:
        raise ValueError("beta_fn requires positive arguments")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z in [0, 1)."""
    if z < 0.0 or z >= 1.0:
        raise ValueError("hyp2f1 argument must lie in [0, 1)")
    if c <= 0.0:
        raise ValueError("hyp2f1 requires c > 0")
    out = _hyp2f1_raw(a, b, c, z)
    if math.isnan(out):
        raise ArithmeticError("hyp2f1 series failed to converge")
    return out


def im_li2_on_circle(phi: float) -> float:
    """Im[Li2(e^{i*phi})], i.e. the Clausen function Cl2(phi).

    2pi-periodic and odd; the sign is peeled off first so oddness holds
    exactly. Callers needing Im[Li2(-e^{2j*theta})] pass phi = 2*theta + pi.
    """
    if phi < 0.0:
        return -_cl2_raw(-phi)
    return _cl2_raw(phi)


def z0(z1: float, z2: float, z3: float, z4: float, z5: float) -> float:
    """Integral of R^-z5 over theta in [z1, z2], R in [z3, z4]."""
    if z1 > z2:
        raise ValueError("z0 requires z1 <= z2")
    if z3 <= 0.0 or z4 <= 0.0:
        raise ValueError("z0 requires positive radii")
    if abs(z5 - 1.0) < _CASE_EPS:
        return (z2 - z1) * math.log(z4 / z3)
    return (z2 - z1) * (z4 ** (1.0 - z5) - z3 ** (1.0 - z5)) / (1.0 - z5)


@dataclass(frozen=True)
class Z1Args:
    """Arguments of the wall-bounded sector integral.

    z1, z2: angular limits [rad], measured from the wall perpendicular;
    z3: inner radius [m] (math.inf requests the analytic z3->inf limit,
    finite only for z5 > 1); z4: perpendicular wall distance [m];
    z5: radial exponent.
    """

    z1: float
    z2: float
    z3: float
    z4: float
    z5: float

    def __post_init__(self) -> None:
        if not (-HALF_PI < self.z1 <= self.z2 < HALF_PI):
            raise ValueError("z1_fn angles must satisfy -pi/2 < z1 <= z2 < pi/2")
        if not self.z3 > 0.0:
            raise ValueError("z1_fn requires z3 > 0")
        if math.isinf(self.z3) and self.z5 <= 1.0:
            raise ValueError("z3 = inf requires z5 > 1 for convergence")
        if not self.z4 > 0.0 or math.isinf(self.z4):
            raise ValueError("z1_fn requires finite z4 > 0")
        if self.z5 < -1.0:
            raise ValueError("z1_fn requires z5 >= -1")


def z1_fn(args: Z1Args) -> float:
    """Integral of R^-z5 over theta in [z1, z2], R in [z3, z4/cos(theta)].

    Evaluates the four-case closed form. The formulas hold whether or
    not the wall trace lies beyond z3 (negative values mean the wall is
    inside the inner radius).
    """
    z1, z2, z3, z4, z5 = args.z1, args.z2, args.z3, args.z4, args.z5
    if z1 == z2:
        return 0.0
    if HALF_PI - max(abs(z1), abs(z2)) < ANGLE_GUARD:
        raise ValueError("z1_fn angle within guard of +-pi/2")
    if abs(z5 + 1.0) < _CASE_EPS:
        return z4 * z4 * (math.tan(z2) - math.tan(z1)) / 2.0 + (z1 - z2) * z3 * z3 / 2.0
    if abs(z5) < _CASE_EPS:
        num = math.tan(z2) + 1.0 / math.cos(z2)
        den = math.tan(z1) + 1.0 / math.cos(z1)
        return z4 * math.log(num / den) + (z1 - z2) * z3
    if abs(z5 - 1.0) < _CASE_EPS:
        lobe = _cl2_raw(2.0 * z2 + math.pi) - _cl2_raw(2.0 * z1 + math.pi)
        return (z2 - z1) * math.log(2.0 * z4 / z3) + lobe / 2.0
    return _z1_general_raw(z1, z2, z3, z4, z5)
