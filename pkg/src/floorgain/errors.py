"""Exception types shared across the package."""

from __future__ import annotations


class FloorgainError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateGeometry(FloorgainError):
    """A wall segment or polygon is degenerate (zero length, self-crossing)."""


class ProbeTooClose(FloorgainError):
    """Probe point violates the minimum clearance from a wall."""

    def __init__(self, message: str, wall_id: str | None = None, distance: float | None = None):
        super().__init__(message)
        self.wall_id = wall_id
        self.distance = distance


class NotEnclosed(FloorgainError):
    """Probe point is not fully surrounded by walls.

    LOS interference diverges over any uncovered sector when the LOS
    path-loss exponent is below 2, so evaluation refuses to proceed.
    ``gaps`` holds the uncovered azimuth intervals in radians.
    """

    def __init__(self, message: str, gaps: tuple[tuple[float, float], ...] = ()):
        super().__init__(message)
        self.gaps = tuple(gaps)


class NonConvergence(FloorgainError):
    """Adaptive quadrature exhausted its subdivision budget."""


class LayoutError(FloorgainError):
    """Layout document failed schema validation.

    ``context`` names the offending field, e.g. ``walls[3].bx``.
    """

    def __init__(self, message: str, context: str | None = None):
        super().__init__(message if context is None else f"{context}: {message}")
        self.context = context
