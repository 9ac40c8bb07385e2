"""Closed-form wireless figures of merit for building floor plans.

Computes the interference gain and power gain of a polygonal layout at
any probe point, exactly, and validates the closed forms against
independent quadrature and Monte Carlo oracles.
"""

from .closedform import (
    OpenSpacePowers,
    ThetaThresholds,
    TmPowers,
    ToyModel,
    open_space_powers,
    theta_thresholds,
    tm_powers,
)
from .errors import (
    DegenerateGeometry,
    FloorgainError,
    LayoutError,
    NonConvergence,
    NotEnclosed,
    ProbeTooClose,
)
from .fom import (
    FomResult,
    HeatmapGrid,
    SignalBreakdown,
    SweepRow,
    evaluate_grid,
    evaluate_point,
    rectangle_layout,
    regular_polygon_layout,
    sweep_rect,
)
from .geometry import (
    Layout,
    Room,
    TmDecomposition,
    WallSegment,
    decompose,
    enclosure_check,
    point_in_room,
)
from .oracle import (
    McEstimate,
    McSpec,
    QuadratureSpec,
    ValidationReport,
    mc_fom,
    mc_point,
    quad_open_powers,
    quad_region,
    validate,
)
from .scenario import (
    CoverageRadii,
    ScenarioParams,
    coverage_radii,
    db_to_linear,
    linear_to_db,
    path_gain_los,
    path_gain_nlos,
    path_gain_open,
)

__version__ = "0.1.0"

__all__ = [
    "CoverageRadii",
    "DegenerateGeometry",
    "FloorgainError",
    "FomResult",
    "HeatmapGrid",
    "Layout",
    "LayoutError",
    "McEstimate",
    "McSpec",
    "NonConvergence",
    "NotEnclosed",
    "OpenSpacePowers",
    "ProbeTooClose",
    "QuadratureSpec",
    "Room",
    "ScenarioParams",
    "SignalBreakdown",
    "SweepRow",
    "ThetaThresholds",
    "TmDecomposition",
    "TmPowers",
    "ToyModel",
    "ValidationReport",
    "WallSegment",
    "coverage_radii",
    "db_to_linear",
    "decompose",
    "enclosure_check",
    "evaluate_grid",
    "evaluate_point",
    "linear_to_db",
    "mc_fom",
    "mc_point",
    "open_space_powers",
    "path_gain_los",
    "path_gain_nlos",
    "path_gain_open",
    "point_in_room",
    "quad_open_powers",
    "quad_region",
    "rectangle_layout",
    "regular_polygon_layout",
    "sweep_rect",
    "theta_thresholds",
    "tm_powers",
    "validate",
]
