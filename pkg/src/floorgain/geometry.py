"""Floor-plan model and nearest-wall decomposition into toy models.

A probe point partitions azimuth into maximal intervals in which a
single wall is the first one hit by a ray. Interval boundaries can only
occur at wall-endpoint azimuths or at azimuths through wall-wall
crossing points, so one midpoint ray per candidate interval decides
ownership exactly, without numeric root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .closedform import ToyModel
from .errors import DegenerateGeometry, ProbeTooClose

TWO_PI = 2.0 * math.pi

# Azimuths closer than this are treated as one sweep event.
_EVENT_EPS = 1e-12

# Relative slack when deciding ties between ray-wall hit distances.
_TIE_REL = 1e-9

# Intervals narrower than this are measure-zero artefacts (edge-on
# walls, duplicated events) and are dropped.
_MIN_SPAN = 1e-12

# Hard floor on the wall-line distance of an emitted toy model. Exceeds
# lambda/4pi for every carrier frequency up to 300 GHz.
_MIN_D0 = 1e-4

Point = tuple[float, float]


@dataclass(frozen=True)
class WallSegment:
    """A wall: one straight segment with a stable identifier."""

    id: str
    a: Point
    b: Point

    def __post_init__(self) -> None:
        if math.dist(self.a, self.b) <= 0.0:
            raise DegenerateGeometry(f"wall {self.id!r} has zero length")

    @property
    def length(self) -> float:
        return math.dist(self.a, self.b)


@dataclass(frozen=True)
class Room:
    """A simple polygon (ordered vertex loop) used for per-room averages."""

    id: str
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise DegenerateGeometry(f"room {self.id!r} needs at least 3 vertices")
        if _polygon_self_intersects(self.vertices):
            raise DegenerateGeometry(f"room {self.id!r} polygon self-intersects")


@dataclass(frozen=True)
class Layout:
    """Wall-segment floor plan with optional room polygons."""

    walls: tuple[WallSegment, ...]
    rooms: tuple[Room, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for w in self.walls:
            if w.id in seen:
                raise DegenerateGeometry(f"duplicate wall id {w.id!r}")
            seen.add(w.id)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([w.a for w in self.walls], dtype=float).reshape(-1, 2)
        b = np.array([w.b for w in self.walls], dtype=float).reshape(-1, 2)
        return a, b

    @cached_property
    def bounds(self) -> tuple[float, float, float, float]:
        """Axis-aligned extent (xmin, ymin, xmax, ymax)."""
        if not self.walls:
            return (0.0, 0.0, 0.0, 0.0)
        a, b = self._arrays
        pts = np.vstack([a, b])
        return (
            float(pts[:, 0].min()),
            float(pts[:, 1].min()),
            float(pts[:, 0].max()),
            float(pts[:, 1].max()),
        )

    @cached_property
    def diameter(self) -> float:
        xmin, ymin, xmax, ymax = self.bounds
        return math.hypot(xmax - xmin, ymax - ymin)

    @cached_property
    def _crossings(self) -> np.ndarray:
        """Interior crossing points between wall pairs, shape (m, 2).

        Shared endpoints already generate endpoint events, so only
        proper crossings (both parameters strictly inside) matter.
        """
        a, b = self._arrays
        pts: list[tuple[float, float]] = []
        n = len(self.walls)
        for i in range(n):
            for j in range(i + 1, n):
                hit = _segment_crossing(a[i], b[i], a[j], b[j])
                if hit is not None:
                    pts.append(hit)
        return np.array(pts, dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class TmDecomposition:
    """Toy models owning disjoint azimuth intervals around one probe."""

    tms: tuple[ToyModel, ...]
    covered: float
    gaps: tuple[tuple[float, float], ...] = field(default=())


def _polygon_self_intersects(verts: tuple[Point, ...]) -> bool:
    n = len(verts)
    edges = [(np.array(verts[i]), np.array(verts[(i + 1) % n])) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share a vertex by construction
            if _segment_crossing(*edges[i], *edges[j]) is not None:
                return True
    return False


def _segment_crossing(a0, a1, b0, b1) -> tuple[float, float] | None:
    """Proper crossing point of two segments, or None."""
    d0 = a1 - a0
    d1 = b1 - b0
    den = d0[0] * d1[1] - d0[1] * d1[0]
    if abs(den) < 1e-15:
        return None
    diff = b0 - a0
    t = (diff[0] * d1[1] - diff[1] * d1[0]) / den
    s = (diff[0] * d0[1] - diff[1] * d0[0]) / den
    eps = 1e-12
    if eps < t < 1.0 - eps and eps < s < 1.0 - eps:
        p = a0 + t * d0
        return (float(p[0]), float(p[1]))
    return None


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from point p to segments a->b (vectorized over rows)."""
    ab = b - a
    ap = p[None, :] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", ap, ab) / denom, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.hypot(*(p[None, :] - closest).T)


def _raycast_matrix(layout: Layout, probe: Point, azimuths: np.ndarray) -> np.ndarray:
    """Hit distances, shape (len(azimuths), n_walls); inf where no hit.

    Rays running exactly along a wall's line do not count as hits.
    """
    a, b = layout._arrays
    p = np.asarray(probe, dtype=float)
    dx = np.cos(azimuths)
    dy = np.sin(azimuths)
    e = b - a
    ap = a - p
    # cross products: den[m, n] = d_m x e_n, t numerator is per-wall only
    den = np.outer(dx, e[:, 1]) - np.outer(dy, e[:, 0])
    t_num = ap[:, 0] * e[:, 1] - ap[:, 1] * e[:, 0]
    s_num = np.outer(dy, ap[:, 0]) - np.outer(dx, ap[:, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num[None, :] / den
        s = s_num / den
    mask = (np.abs(den) > 1e-15) & (t > 1e-12) & (s >= -1e-12) & (s <= 1.0 + 1e-12)
    return np.where(mask, t, np.inf)


def _break_tie(layout: Layout, probe: Point, t_row: np.ndarray, tmin: float) -> int:
    a, b = layout._arrays
    candidates = np.flatnonzero(t_row <= tmin * (1.0 + _TIE_REL))
    if len(candidates) == 1:
        return int(candidates[0])
    end_d = np.minimum(
        np.hypot(a[candidates, 0] - probe[0], a[candidates, 1] - probe[1]),
        np.hypot(b[candidates, 0] - probe[0], b[candidates, 1] - probe[1]),
    )
    order = sorted(range(len(candidates)), key=lambda k: (end_d[k], layout.walls[candidates[k]].id))
    return int(candidates[order[0]])


def nearest_wall_along_ray(
    layout: Layout, probe: Point, azimuth: float
) -> tuple[int, float] | None:
    """First wall hit by the ray from probe at the given azimuth.

    Returns (wall index, hit distance) or None. Ties within relative
    tolerance are resolved by nearer wall endpoint, then by smaller id.
    """
    if len(layout.walls) == 0:
        return None
    t = _raycast_matrix(layout, probe, np.array([azimuth]))[0]
    tmin = t.min()
    if not np.isfinite(tmin):
        return None
    idx = _break_tie(layout, probe, t, float(tmin))
    return idx, float(t[idx])


def _toy_model_for(layout: Layout, probe: Point, wall_idx: int, alo: float, ahi: float) -> ToyModel:
    w = layout.walls[wall_idx]
    ax, ay = w.a
    bx, by = w.b
    px, py = probe
    ux, uy = bx - ax, by - ay
    norm = math.hypot(ux, uy)
    ux, uy = ux / norm, uy / norm
    # Perpendicular foot of the probe on the supporting line.
    proj = (px - ax) * ux + (py - ay) * uy
    fx, fy = ax + proj * ux, ay + proj * uy
    d0 = math.hypot(fx - px, fy - py)
    if d0 <= _MIN_D0:
        raise ProbeTooClose(
            f"probe lies within {_MIN_D0} m of the supporting line of wall {w.id!r}",
            wall_id=w.id,
            distance=d0,
        )
    phi = math.atan2(fy - py, fx - px)
    theta_l = _wrap_pi(alo - phi)
    theta_r = _wrap_pi(ahi - phi)
    if theta_r < theta_l:  # branch-cut artefact; cannot occur for a valid chord
        raise DegenerateGeometry(
            f"wall {w.id!r} spans the anti-perpendicular direction from the probe"
        )
    return ToyModel(d0=d0, theta_l=theta_l, theta_r=theta_r, phi_perp=phi, wall_id=w.id)


def _wrap_pi(x: float) -> float:
    out = math.fmod(x + math.pi, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    return out - math.pi


def decompose(layout: Layout, probe: Point, margin: float = 0.05) -> TmDecomposition:
    """Partition azimuth around the probe by nearest wall.

    Emits one toy model per maximal interval owned by a single wall;
    directions that hit no wall are reported as gaps. Raises
    ProbeTooClose when the probe is within ``margin`` of a wall segment
    (or effectively on a wall's supporting line).
    """
    if margin <= 0.0:
        raise ValueError("margin must be positive")
    if not layout.walls:
        return TmDecomposition(tms=(), covered=0.0, gaps=((0.0, TWO_PI),))
    p = np.asarray(probe, dtype=float)
    a, b = layout._arrays
    seg_d = _point_segment_distance(p, a, b)
    nearest = int(np.argmin(seg_d))
    if seg_d[nearest] < margin:
        w = layout.walls[nearest]
        raise ProbeTooClose(
            f"probe is {seg_d[nearest]:.4g} m from wall {w.id!r} (margin {margin} m)",
            wall_id=w.id,
            distance=float(seg_d[nearest]),
        )

    pts = np.vstack([a, b])
    if len(layout._crossings):
        pts = np.vstack([pts, layout._crossings])
    az = np.mod(np.arctan2(pts[:, 1] - p[1], pts[:, 0] - p[0]), TWO_PI)
    az = np.sort(az)
    keep = np.ones(len(az), dtype=bool)
    keep[1:] = np.diff(az) > _EVENT_EPS
    az = az[keep]
    if len(az) > 1 and (az[0] + TWO_PI) - az[-1] <= _EVENT_EPS:
        az = az[:-1]

    # Candidate intervals between consecutive events, wrapping around.
    starts = az
    ends = np.roll(az, -1).copy()
    ends[-1] += TWO_PI
    mids = 0.5 * (starts + ends)
    t_all = _raycast_matrix(layout, probe, mids)
    t_min = t_all.min(axis=1)
    best = t_all.argmin(axis=1)
    tied = (t_all <= t_min[:, None] * (1.0 + _TIE_REL)).sum(axis=1) > 1
    owners: list[int | None] = []
    for row in range(len(mids)):
        if not np.isfinite(t_min[row]):
            owners.append(None)
        elif tied[row]:
            owners.append(_break_tie(layout, probe, t_all[row], float(t_min[row])))
        else:
            owners.append(int(best[row]))

    # Merge consecutive intervals with the same owner (circular).
    n = len(owners)
    start_idx = 0
    if n > 1:
        for i in range(n):
            if owners[i] != owners[i - 1]:
                start_idx = i
                break
    merged: list[tuple[float, float, int | None]] = []
    i = 0
    while i < n:
        k = (start_idx + i) % n
        owner = owners[k]
        lo = starts[k]
        hi = ends[k]
        j = i + 1
        while j < n and owners[(start_idx + j) % n] == owner:
            hi += ends[(start_idx + j) % n] - starts[(start_idx + j) % n]
            j += 1
        merged.append((float(lo), float(hi), owner))
        i = j

    tms: list[ToyModel] = []
    gaps: list[tuple[float, float]] = []
    covered = 0.0
    for lo, hi, owner in merged:
        span = hi - lo
        if span <= _MIN_SPAN:
            continue
        if owner is None:
            # start normalized to [0, 2pi); end = start + span may pass 2pi
            start = lo % TWO_PI
            gaps.append((start, start + span))
            continue
        covered += span
        tms.append(_toy_model_for(layout, probe, owner, lo, hi))
    return TmDecomposition(tms=tuple(tms), covered=covered, gaps=tuple(gaps))


def enclosure_check(d: TmDecomposition) -> bool:
    """True iff the decomposition covers the full circle."""
    return abs(d.covered - TWO_PI) <= 1e-9


def point_in_room(layout: Layout, probe: Point) -> str | None:
    """Room id containing the probe; boundary points belong to no room."""
    for room in layout.rooms:
        side = _polygon_side(room.vertices, probe)
        if side == 0:
            return None  # on the boundary
        if side > 0:
            return room.id
    return None


def _polygon_side(verts: tuple[Point, ...], p: Point) -> int:
    """1 inside, 0 on boundary (within 1e-12), -1 outside (even-odd rule)."""
    x, y = p
    n = len(verts)
    inside = False
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        # boundary check against the segment
        dx, dy = x1 - x0, y1 - y0
        seg_len2 = dx * dx + dy * dy
        t = ((x - x0) * dx + (y - y0) * dy) / seg_len2
        t = min(1.0, max(0.0, t))
        if math.hypot(x - (x0 + t * dx), y - (y0 + t * dy)) <= 1e-12:
            return 0
        if (y0 > y) != (y1 > y):
            x_int = x0 + (y - y0) * dx / dy
            if x < x_int:
                inside = not inside
    return 1 if inside else -1
