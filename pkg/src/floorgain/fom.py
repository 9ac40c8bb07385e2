"""Per-point figures of merit, grid evaluation, and parameter sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .closedform import open_space_powers, tm_powers
from .errors import NotEnclosed, ProbeTooClose
from .geometry import Layout, Point, Room, WallSegment, decompose, enclosure_check, point_in_room
from .scenario import ScenarioParams, coverage_radii


@dataclass(frozen=True)
class SignalBreakdown:
    """The six powers [W] seen by one probe point."""

    p_o: float
    i_o: float
    p_l: float
    i_l: float
    p_n: float
    i_n: float

    @property
    def p_b(self) -> float:
        """Indoor intended power."""
        return self.p_l + self.p_n

    @property
    def i_b(self) -> float:
        """Indoor interference power."""
        return self.i_l + self.i_n

    def as_dict(self) -> dict[str, float]:
        return {
            "p_o": self.p_o,
            "i_o": self.i_o,
            "p_l": self.p_l,
            "i_l": self.i_l,
            "p_n": self.p_n,
            "i_n": self.i_n,
        }


@dataclass(frozen=True)
class FomResult:
    """Interference gain, power gain and the two SINRs (all linear)."""

    g_i: float
    g_p: float
    gamma_o: float
    gamma_b: float

    def as_dict(self) -> dict[str, float]:
        return {
            "g_i": self.g_i,
            "g_p": self.g_p,
            "gamma_o": self.gamma_o,
            "gamma_b": self.gamma_b,
        }


def fom_from_breakdown(b: SignalBreakdown, sigma2: float) -> FomResult:
    """Derive the gains and SINRs from the six powers."""
    g_i = (b.i_o + sigma2) / (b.i_b + sigma2)
    g_p = b.p_b / b.p_o
    gamma_o = b.p_o / (b.i_o + sigma2)
    return FomResult(g_i=g_i, g_p=g_p, gamma_o=gamma_o, gamma_b=g_i * g_p * gamma_o)


def evaluate_point(
    layout: Layout, probe: Point, p: ScenarioParams, margin: float = 0.05
) -> tuple[SignalBreakdown, FomResult]:
    """Exact six-power breakdown and FoMs at one probe point.

    Raises NotEnclosed when the probe's azimuth is not fully covered by
    walls, and propagates ProbeTooClose from the decomposition.
    """
    d = decompose(layout, probe, margin=margin)
    if not enclosure_check(d):
        raise NotEnclosed(
            f"probe {probe} is not enclosed: walls cover only "
            f"{d.covered:.6f} of {2 * math.pi:.6f} rad of azimuth",
            gaps=d.gaps,
        )
    radii = coverage_radii(p)
    p_l = i_l = p_n = i_n = 0.0
    for tm in d.tms:
        t = tm_powers(tm, p, radii)
        p_l += t.p_l
        i_l += t.i_l
        p_n += t.p_n
        i_n += t.i_n
    osp = open_space_powers(p)
    breakdown = SignalBreakdown(p_o=osp.p_o, i_o=osp.i_o, p_l=p_l, i_l=i_l, p_n=p_n, i_n=i_n)
    return breakdown, fom_from_breakdown(breakdown, p.sigma2)


@dataclass
class HeatmapGrid:
    """Rasterized FoM field over a layout's bounding box.

    Cell (ix, iy) is sampled at its centre; invalid cells (probe too
    close to a wall, or not enclosed) hold NaN. Averages are arithmetic
    means of the linear gains over valid cells only.
    """

    origin: Point
    cell_size: float
    nx: int
    ny: int
    g_i: np.ndarray
    g_p: np.ndarray
    gamma_b: np.ndarray
    gamma_o: float
    room_averages: dict[str, tuple[float, float]] = field(default_factory=dict)
    global_average: tuple[float, float] | None = None

    def cell_center(self, ix: int, iy: int) -> Point:
        return (
            self.origin[0] + (ix + 0.5) * self.cell_size,
            self.origin[1] + (iy + 0.5) * self.cell_size,
        )

    def is_valid(self, ix: int, iy: int) -> bool:
        return bool(np.isfinite(self.g_i[iy, ix]))

    def result_at(self, ix: int, iy: int) -> FomResult | None:
        if not self.is_valid(ix, iy):
            return None
        g_i = float(self.g_i[iy, ix])
        g_p = float(self.g_p[iy, ix])
        return FomResult(g_i=g_i, g_p=g_p, gamma_o=self.gamma_o, gamma_b=float(self.gamma_b[iy, ix]))

    @property
    def valid_count(self) -> int:
        return int(np.isfinite(self.g_i).sum())


def _eval_cells(args) -> list[tuple[int, int, float, float, float]]:
    layout, p, margin, cells = args
    out = []
    for ix, iy, x, y in cells:
        try:
            _, fr = evaluate_point(layout, (x, y), p, margin=margin)
        except (ProbeTooClose, NotEnclosed):
            continue
        out.append((ix, iy, fr.g_i, fr.g_p, fr.gamma_b))
    return out


def evaluate_grid(
    layout: Layout,
    p: ScenarioParams,
    resolution: float = 0.25,
    margin: float = 0.05,
    workers: int = 1,
    db_average: bool = False,
) -> HeatmapGrid:
    """Evaluate FoMs at every grid-cell centre inside the layout bounds."""
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    xmin, ymin, xmax, ymax = layout.bounds
    nx = max(1, int(math.ceil((xmax - xmin) / resolution - 1e-12)))
    ny = max(1, int(math.ceil((ymax - ymin) / resolution - 1e-12)))
    g_i = np.full((ny, nx), np.nan)
    g_p = np.full((ny, nx), np.nan)
    gamma_b = np.full((ny, nx), np.nan)

    cells = [
        (ix, iy, xmin + (ix + 0.5) * resolution, ymin + (iy + 0.5) * resolution)
        for iy in range(ny)
        for ix in range(nx)
    ]
    if workers > 1 and len(cells) > 4 * workers:
        chunks = [cells[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_eval_cells, [(layout, p, margin, ch) for ch in chunks])
        rows = [r for chunk in results for r in chunk]
    else:
        rows = _eval_cells((layout, p, margin, cells))
    for ix, iy, gi, gp, gb in rows:
        g_i[iy, ix] = gi
        g_p[iy, ix] = gp
        gamma_b[iy, ix] = gb

    osp = open_space_powers(p)
    gamma_o = osp.p_o / (osp.i_o + p.sigma2)
    grid = HeatmapGrid(
        origin=(xmin, ymin),
        cell_size=resolution,
        nx=nx,
        ny=ny,
        g_i=g_i,
        g_p=g_p,
        gamma_b=gamma_b,
        gamma_o=gamma_o,
    )
    _fill_averages(grid, layout, db_average=db_average)
    return grid


def _mean(values: np.ndarray, db: bool) -> float:
    if db:
        return float(10.0 ** (np.mean(10.0 * np.log10(values)) / 10.0))
    return float(np.mean(values))


def _fill_averages(grid: HeatmapGrid, layout: Layout, db_average: bool = False) -> None:
    valid = np.isfinite(grid.g_i)
    if valid.any():
        grid.global_average = (
            _mean(grid.g_i[valid], db_average),
            _mean(grid.g_p[valid], db_average),
        )
    if not layout.rooms:
        return
    room_cells: dict[str, list[tuple[int, int]]] = {r.id: [] for r in layout.rooms}
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            if not valid[iy, ix]:
                continue
            rid = point_in_room(layout, grid.cell_center(ix, iy))
            if rid is not None:
                room_cells[rid].append((ix, iy))
    for rid, cells in room_cells.items():
        if not cells:
            continue
        gi = np.array([grid.g_i[iy, ix] for ix, iy in cells])
        gp = np.array([grid.g_p[iy, ix] for ix, iy in cells])
        grid.room_averages[rid] = (_mean(gi, db_average), _mean(gp, db_average))


def rectangle_layout(width: float, height: float, origin: Point = (0.0, 0.0)) -> Layout:
    """Closed axis-aligned rectangular room."""
    x0, y0 = origin
    corners = [(x0, y0), (x0 + width, y0), (x0 + width, y0 + height), (x0, y0 + height)]
    walls = tuple(
        WallSegment(id=f"w{i}", a=corners[i], b=corners[(i + 1) % 4]) for i in range(4)
    )
    room = Room(id="room", vertices=tuple(corners))
    return Layout(walls=walls, rooms=(room,), name=f"rect {width:g}x{height:g}")


def regular_polygon_layout(n_sides: int, circumradius: float, center: Point = (0.0, 0.0)) -> Layout:
    """Regular n-gon, used to approximate circular rooms."""
    if n_sides < 3:
        raise ValueError("polygon needs at least 3 sides")
    cx, cy = center
    verts = [
        (cx + circumradius * math.cos(2 * math.pi * k / n_sides),
         cy + circumradius * math.sin(2 * math.pi * k / n_sides))
        for k in range(n_sides)
    ]
    walls = tuple(
        WallSegment(id=f"w{k}", a=verts[k], b=verts[(k + 1) % n_sides])
        for k in range(n_sides)
    )
    room = Room(id="room", vertices=tuple(verts))
    return Layout(walls=walls, rooms=(room,), name=f"{n_sides}-gon R={circumradius:g}")


@dataclass(frozen=True)
class SweepRow:
    """One (area, aspect ratio) cell of a room-size sweep."""

    area: float
    aspect_ratio: float
    avg_g_i: float
    avg_g_p: float
    width: float
    height: float
    valid_cells: int


def sweep_rect(
    areas: list[float],
    aspect_ratios: list[float],
    p: ScenarioParams,
    resolution: float = 0.5,
    margin: float = 0.05,
) -> list[SweepRow]:
    """Average FoMs of rectangular rooms over a size / aspect-ratio grid.

    A rectangle of area A and aspect ratio AR has sides
    sqrt(A*AR) x sqrt(A/AR).
    """
    rows: list[SweepRow] = []
    for area in areas:
        if area <= 0.0:
            raise ValueError("areas must be positive")
        for ar in aspect_ratios:
            if ar < 1.0:
                raise ValueError("aspect ratios must be >= 1")
            width = math.sqrt(area * ar)
            height = math.sqrt(area / ar)
            layout = rectangle_layout(width, height)
            res = min(resolution, width / 4.0, height / 4.0)
            grid = evaluate_grid(layout, p, resolution=res, margin=margin)
            if grid.global_average is None:
                raise NotEnclosed(
                    f"no valid probe cells in a {width:.3g}x{height:.3g} room "
                    f"(margin {margin} m too large?)"
                )
            avg_gi, avg_gp = grid.global_average
            rows.append(
                SweepRow(
                    area=area,
                    aspect_ratio=ar,
                    avg_g_i=avg_gi,
                    avg_g_p=avg_gp,
                    width=width,
                    height=height,
                    valid_cells=grid.valid_count,
                )
            )
    return rows
