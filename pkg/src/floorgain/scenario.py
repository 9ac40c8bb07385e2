"""Radio configuration, path-gain models and coverage radii.

All internal math runs on linear quantities (W, W/m^2, plain ratios);
decibel values are converted once at the configuration boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 3.0e8  # m/s

# Model reference distance: the indoor exponents take over beyond 1 m.
REF_DISTANCE = 1.0  # m


def db_to_linear(db: float) -> float:
    """Convert a dB quantity (dBW, dBW/m^2, dB ratio) to linear scale."""
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a positive linear quantity to dB."""
    if x <= 0.0:
        raise ValueError(f"cannot express non-positive value {x!r} in dB")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ScenarioParams:
    """Radio parameters of one evaluation scenario.

    Attributes
    ----------
    f_c : carrier frequency [Hz]
    p_t : transmit power density [W/m^2]
    p_th : receiver detection threshold power density [W/m^2]
    sigma2 : thermal noise power [W]
    h_t, h_r : transmit / receive antenna heights [m]
    n_l, n_n : LOS / NLOS path-loss exponents beyond 1 m
    """

    f_c: float
    p_t: float
    p_th: float
    sigma2: float = db_to_linear(-93.0)
    h_t: float = 1.2
    h_r: float = 1.2
    n_l: float = 1.73
    n_n: float = 3.19

    def __post_init__(self) -> None:
        if self.f_c <= 0.0:
            raise ValueError("carrier frequency must be positive")
        if self.h_t <= 0.0 or self.h_r <= 0.0:
            raise ValueError("antenna heights must be positive")
        if self.p_t <= 0.0 or self.p_th <= 0.0:
            raise ValueError("power densities must be positive")
        if self.sigma2 < 0.0:
            raise ValueError("noise power must be non-negative")
        if self.n_l <= 0.0:
            raise ValueError("LOS exponent must be positive")
        if self.n_n <= 2.0:
            # NLOS interference integrates R^(1-n_n) out to infinity; it
            # diverges unless n_n > 2.
            raise ValueError("NLOS exponent must exceed 2 for finite interference")
        if self.p_th >= self.p_t * self.ref_gain:
            # Equivalent to requiring every coverage radius to exceed 1 m.
            raise ValueError(
                "p_th must stay below p_t*(lambda/4pi)^2 so that all "
                "coverage radii exceed the 1 m reference distance"
            )
        # Premises of the indoor closed forms: the free-space slope region
        # must start below 1 m and the two-ray breakpoint must lie beyond it.
        if self.lam / (4.0 * math.pi) >= REF_DISTANCE:
            raise ValueError("lambda/4pi must be below 1 m (frequency too low)")
        if self.two_ray_breakpoint <= REF_DISTANCE:
            raise ValueError("two-ray breakpoint 4*pi*h_t*h_r/lambda must exceed 1 m")

    @property
    def lam(self) -> float:
        """Wavelength [m]."""
        return SPEED_OF_LIGHT / self.f_c

    @property
    def ref_gain(self) -> float:
        """Free-space gain factor (lambda/4pi)^2."""
        return (self.lam / (4.0 * math.pi)) ** 2

    @property
    def two_ray_breakpoint(self) -> float:
        """Distance where the R^-4 ground-bounce slope takes over [m]."""
        return 4.0 * math.pi * self.h_t * self.h_r / self.lam

    @classmethod
    def from_db(
        cls,
        f_c_hz: float,
        p_t_dbw_m2: float,
        p_th_dbw_m2: float,
        sigma2_dbw: float = -93.0,
        h_t_m: float = 1.2,
        h_r_m: float = 1.2,
        n_l: float = 1.73,
        n_n: float = 3.19,
    ) -> "ScenarioParams":
        """Build params from the dB units used in configuration files."""
        return cls(
            f_c=f_c_hz,
            p_t=db_to_linear(p_t_dbw_m2),
            p_th=db_to_linear(p_th_dbw_m2),
            sigma2=db_to_linear(sigma2_dbw),
            h_t=h_t_m,
            h_r=h_r_m,
            n_l=n_l,
            n_n=n_n,
        )

    def as_db_dict(self) -> dict[str, float]:
        """Resolved parameter set in configuration units."""
        return {
            "f_c_hz": self.f_c,
            "p_t_dbw_m2": linear_to_db(self.p_t),
            "p_th_dbw_m2": linear_to_db(self.p_th),
            "sigma2_dbw": linear_to_db(self.sigma2) if self.sigma2 > 0 else -math.inf,
            "h_t_m": self.h_t,
            "h_r_m": self.h_r,
            "n_l": self.n_l,
            "n_n": self.n_n,
        }


@dataclass(frozen=True)
class CoverageRadii:
    """Horizontal distances where received density falls to the threshold."""

    r_o: float
    r_l: float
    r_n: float


def path_gain_open(r: float, p: ScenarioParams) -> float:
    """Open-space path gain min{1, (lambda/4pi)^2 R^-2, (h_t h_r)^2 R^-4}."""
    if r < 0.0:
        raise ValueError("distance must be non-negative")
    if r == 0.0:
        return 1.0
    return min(1.0, p.ref_gain / (r * r), (p.h_t * p.h_r) ** 2 / r**4)


def path_gain_los(r: float, p: ScenarioParams) -> float:
    """Indoor LOS path gain; follows the open-space model up to 1 m."""
    if r <= REF_DISTANCE:
        return path_gain_open(r, p)
    return p.ref_gain * r ** (-p.n_l)


def path_gain_nlos(r: float, p: ScenarioParams) -> float:
    """Indoor NLOS path gain; follows the open-space model up to 1 m."""
    if r <= REF_DISTANCE:
        return path_gain_open(r, p)
    return p.ref_gain * r ** (-p.n_n)


def coverage_radii(p: ScenarioParams) -> CoverageRadii:
    """Solve p_t * G_s(R_s) = p_th for each of the three gain models.

    The open-space radius has two regimes depending on whether the
    threshold is reached on the R^-2 slope or on the R^-4 slope.
    """
    ratio = p.p_t / p.p_th
    breakpoint_ratio = (4.0 * math.pi) ** 4 * (p.h_t * p.h_r) ** 2 / p.lam**4
    if ratio < breakpoint_ratio:
        r_o = math.sqrt(ratio) * p.lam / (4.0 * math.pi)
    else:
        r_o = ratio**0.25 * math.sqrt(p.h_t * p.h_r)
    r_l = ratio ** (1.0 / p.n_l) * p.ref_gain ** (1.0 / p.n_l)
    r_n = ratio ** (1.0 / p.n_n) * p.ref_gain ** (1.0 / p.n_n)
    return CoverageRadii(r_o=r_o, r_l=r_l, r_n=r_n)
