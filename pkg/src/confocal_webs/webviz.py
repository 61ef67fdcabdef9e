"""Deterministic SVG figures: web lattice images and the tangency construction.

Curves are traced as adaptive polylines in their chart parameter.  A segment
is split while the image of its parameter midpoint is more than 0.25 pixels
off the chord.  Clipping to a viewport also happens in parameter space, by
bisection, so every emitted vertex is an exact image point rather than a
chord intersection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyIntersection, InvalidScale, NoTangentConic
from .focal import FAMILY_MEASURE, Family, Point, measure_arrays
from .tangency import (
    CERTIFY_TOL,
    Circle,
    Pencil,
    PencilParam,
    scaled_circle,
    scaling_pair,
    tangency_residual,
)
from .verification import relative_discrepancy
from .webs import FUNCTIONAL, Direction, WebId, domain_box, family_of_direction, forward_xy
from .webs import directions as web_directions

TOL_PX = 0.25
INITIAL_SEGMENTS = 32
MAX_DEPTH = 24
CHART_GUARD = 1e-6
DEFAULT_PPU = 100.0

STYLE = {
    Family.HYPERBOLIC_APOLLONIAN: "#1f77b4",
    Family.ELLIPTIC_APOLLONIAN: "#d62728",
    Family.CONFOCAL_ELLIPSE: "#2ca02c",
    Family.CONFOCAL_HYPERBOLA: "#9467bd",
    Family.VERTICAL_LINE: "#7f7f7f",
    Family.HORIZONTAL_LINE: "#8c564b",
}

Box = tuple[float, float, float, float]  # (x0, x1, y0, y1)
CurveFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class LatticeSpec:
    web: WebId
    step: float
    shift: tuple[float, float] = (0.0, 0.0)
    directions: tuple[Direction, ...] | None = None
    window: Box = (0.05, 3.5, -3.5, 3.5)
    viewport: Box | None = None  # plane box; fitted to the curves when None
    ppu: float = DEFAULT_PPU

    def resolved_directions(self) -> tuple[Direction, ...]:
        web = WebId.parse(self.web)
        if self.directions is None:
            return web_directions(web)
        for d in self.directions:
            family_of_direction(web, d)  # raises UnsupportedDirection
        order = list(Direction)
        return tuple(sorted({Direction(d) for d in self.directions}, key=order.index))


@dataclass
class Polyline:
    family: Family
    points: np.ndarray  # (n, 2) plane coordinates
    direction: Direction | None = None
    level: float | None = None


@dataclass
class SvgScene:
    viewport: Box
    polylines: list[Polyline] = field(default_factory=list)
    ppu: float = DEFAULT_PPU
    title: str = ""

    def count(self, family: Family) -> int:
        return sum(1 for p in self.polylines if p.family is family)

    def to_svg(self) -> str:
        return scene_to_svg(self)


def _chord_deviation(pa, pm, pb) -> float:
    dx, dy = pb[0] - pa[0], pb[1] - pa[1]
    L2 = dx * dx + dy * dy
    mx, my = pm[0] - pa[0], pm[1] - pa[1]
    if L2 == 0.0:
        return math.hypot(mx, my)
    u = min(1.0, max(0.0, (mx * dx + my * dy) / L2))
    return math.hypot(mx - u * dx, my - u * dy)


def trace(func: CurveFn, u0: float, u1: float, ppu: float = DEFAULT_PPU, tol_px: float = TOL_PX):
    """Adaptive polyline of ``func`` on [u0, u1]; returns (params, points) in parameter order."""
    us = np.linspace(u0, u1, INITIAL_SEGMENTS + 1)
    xs, ys = func(us)
    tol = tol_px / ppu
    out_u = [float(us[0])]
    out_p = [(float(xs[0]), float(ys[0]))]
    for i in range(INITIAL_SEGMENTS):
        # explicit stack, right half pushed first so output stays ordered
        stack = [(float(us[i]), (float(xs[i]), float(ys[i])), float(us[i + 1]), (float(xs[i + 1]), float(ys[i + 1])), 0)]
        while stack:
            ua, pa, ub, pb, depth = stack.pop()
            um = 0.5 * (ua + ub)
            mx, my = func(np.array([um]))
            pm = (float(mx[0]), float(my[0]))
            if depth < MAX_DEPTH and _chord_deviation(pa, pm, pb) > tol:
                stack.append((um, pm, ub, pb, depth + 1))
                stack.append((ua, pa, um, pm, depth + 1))
            else:
                out_u.append(ub)
                out_p.append(pb)
    return np.array(out_u), np.array(out_p)


def _inside(p, box: Box) -> bool:
    return box[0] <= p[0] <= box[1] and box[2] <= p[1] <= box[3]


def clip_runs(func: CurveFn, us: np.ndarray, pts: np.ndarray, viewport: Box) -> list[np.ndarray]:
    """Split a traced curve into the runs inside ``viewport``.

    Boundary crossings are located by bisecting the parameter, keeping the
    inside end, so clipped ends are curve points.
    """

    def crossing(ua, ub, a_inside):
        for _ in range(60):
            um = 0.5 * (ua + ub)
            x, y = func(np.array([um]))
            if _inside((x[0], y[0]), viewport) == a_inside:
                ua = um
            else:
                ub = um
        x, y = func(np.array([ua if a_inside else ub]))
        return (float(x[0]), float(y[0]))

    runs = []
    current: list = []
    inside_prev = _inside(pts[0], viewport)
    if inside_prev:
        current.append(tuple(pts[0]))
    for i in range(1, len(pts)):
        inside = _inside(pts[i], viewport)
        if inside and inside_prev:
            current.append(tuple(pts[i]))
        elif inside_prev and not inside:
            current.append(crossing(us[i - 1], us[i], True))
            runs.append(current)
            current = []
        elif inside and not inside_prev:
            current = [crossing(us[i], us[i - 1], True), tuple(pts[i])]
        inside_prev = inside
    if current:
        runs.append(current)
    return [np.array(r) for r in runs if len(r) >= 2]


def chart_segment(web: WebId, direction: Direction, level: float, window: Box, strict: bool = False):
    """Parameter interval and chart parametrisation of the line {direction = level} in window and domain."""
    web = WebId.parse(web)
    direction = Direction(direction)
    dx0, dx1, dy0, dy1 = domain_box(web, strict)
    x0 = max(window[0], dx0 + CHART_GUARD)
    x1 = min(window[1], dx1 - CHART_GUARD)
    y0 = max(window[2], dy0 + CHART_GUARD)
    y1 = min(window[3], dy1 - CHART_GUARD)
    if direction is Direction.X_CONST:
        ok = x0 <= level <= x1
        lo, hi = y0, y1
        chart = lambda u: (np.full_like(u, level), u)  # noqa: E731
    elif direction is Direction.Y_CONST:
        ok = y0 <= level <= y1
        lo, hi = x0, x1
        chart = lambda u: (u, np.full_like(u, level))  # noqa: E731
    elif direction is Direction.DIAG_MINUS:
        ok = True
        lo, hi = max(x0, y0 + level), min(x1, y1 + level)
        chart = lambda u: (u, u - level)  # noqa: E731
    else:
        ok = True
        lo, hi = max(x0, level - y1), min(x1, level - y0)
        chart = lambda u: (u, level - u)  # noqa: E731
    if not ok or not hi > lo:
        raise EmptyIntersection(f"{direction.value} = {level!r} misses the {web.value} window")
    return lo, hi, chart


def _curve_fn(web: WebId, chart) -> CurveFn:
    return lambda u: forward_xy(web, *chart(np.asarray(u, dtype=float)))


def sample_curve(
    web: WebId, direction: Direction, level: float, window: Box, ppu: float = DEFAULT_PPU, strict: bool = False
) -> np.ndarray:
    """Adaptive polyline (n, 2) of the image of the chart line {direction = level}."""
    web = WebId.parse(web)
    lo, hi, chart = chart_segment(web, direction, level, window, strict)
    _, pts = trace(_curve_fn(web, chart), lo, hi, ppu)
    return pts


def lattice_levels(spec: LatticeSpec, direction: Direction) -> list[float]:
    """Levels of the lattice lines step * Z^2 + shift in ``direction`` that fall in the window range."""
    p, q = FUNCTIONAL[Direction(direction)]
    base = p * spec.shift[0] + q * spec.shift[1]
    wx0, wx1, wy0, wy1 = spec.window
    corners = [p * x + q * y for x in (wx0, wx1) for y in (wy0, wy1)]
    k0 = math.ceil((min(corners) - base) / spec.step)
    k1 = math.floor((max(corners) - base) / spec.step)
    return [base + k * spec.step for k in range(k0, k1 + 1)]


def _fit_viewport(polylines: Sequence[Polyline]) -> Box:
    pts = np.vstack([p.points for p in polylines])
    x0, y0 = min(0.0, float(pts[:, 0].min())), min(0.0, float(pts[:, 1].min()))
    x1, y1 = float(pts[:, 0].max()), float(pts[:, 1].max())
    pad = 0.03 * max(x1 - x0, y1 - y0)
    return (x0 - pad, x1 + pad, y0 - pad, y1 + pad)


def render_web_lattice(spec: LatticeSpec) -> SvgScene:
    """Images of the lattice lines through step * Z^2 + shift, one polyline per line."""
    web = WebId.parse(spec.web)
    if not spec.step > 0:
        raise ValueError("lattice step must be positive")
    traced = []
    for direction in spec.resolved_directions():
        family = family_of_direction(web, direction)
        for level in lattice_levels(spec, direction):
            try:
                lo, hi, chart = chart_segment(web, direction, level, spec.window)
            except EmptyIntersection:
                continue
            fn = _curve_fn(web, chart)
            us, pts = trace(fn, lo, hi, spec.ppu)
            traced.append((family, direction, level, fn, us, pts))
    if not traced:
        raise EmptyIntersection(f"no lattice line meets the {web.value} window {spec.window}")
    polylines = [Polyline(f, pts, d, lv) for f, d, lv, _, _, pts in traced]
    if spec.viewport is None:
        return SvgScene(_fit_viewport(polylines), polylines, spec.ppu, f"web {web.value}")
    clipped = []
    for family, direction, level, fn, us, pts in traced:
        for run in clip_runs(fn, us, pts, spec.viewport):
            clipped.append(Polyline(family, run, direction, level))
    return SvgScene(tuple(spec.viewport), clipped, spec.ppu, f"web {web.value}")


def scene_fidelity(scene: SvgScene) -> float:
    """Worst spread of the defining measure along any single polyline of a lattice scene."""
    worst = 0.0
    for pl in scene.polylines:
        m = measure_arrays(pl.points[:, 0], pl.points[:, 1])[FAMILY_MEASURE[pl.family]]
        worst = max(worst, float(np.max(relative_discrepancy(m, m[0]))))
    return worst


def _circle_fn(c: Circle) -> CurveFn:
    return lambda u: (c.center.s + c.radius * np.cos(u), c.center.t + c.radius * np.sin(u))


def tangency_members_for_figure(k1: float, members: int) -> list[tuple[PencilParam, float]]:
    """(member, side) pairs; side -1 draws the member mirrored about the y-axis."""
    ds = [(PencilParam(Pencil.ELLIPTIC, float(d)), 1.0) for d in np.linspace(-2.5, 2.5, members)]
    if k1 > 1.0:
        return ds
    right = np.geomspace(1.25, 8.0, (members + 1) // 2)
    sides = [(m, 1.0) for m in right] + [(m, -1.0) for m in right[: members // 2]]
    return [(PencilParam(Pencil.HYPERBOLIC, float(m)), side) for m, side in sides] + ds


def render_tangency_figure(
    k1: float, members: int = 20, viewport: Box = (-4.0, 4.0, -4.0, 4.0), ppu: float = DEFAULT_PPU
) -> SvgScene:
    """The fixed conic for scale k1 plus ``members`` scaled circles per applicable pencil."""
    if k1 == 1.0 or not k1 > 0:
        raise InvalidScale(f"invalid k1 {k1!r}")
    if members < 1:
        raise ValueError("need at least one member")
    pair = scaling_pair(k1)
    conic = pair.conic
    A, B = conic["A"], conic["B"]
    polylines = []
    if conic.family is Family.CONFOCAL_ELLIPSE:
        fns = [(lambda u: (A * np.cos(u), B * np.sin(u)), 0.0, 2.0 * math.pi)]
    else:
        span = math.asinh(max(abs(v) for v in viewport) / B) + 0.5
        fns = [
            (lambda u, sg=sg: (sg * A * np.cosh(u), B * np.sinh(u)), -span, span) for sg in (1.0, -1.0)
        ]
    for fn, lo, hi in fns:
        us, pts = trace(fn, lo, hi, ppu)
        polylines += [Polyline(conic.family, run) for run in clip_runs(fn, us, pts, viewport)]
    for member, side in tangency_members_for_figure(k1, members):
        circle = scaled_circle(member, pair)
        if side < 0:
            circle = Circle(Point(-circle.center.s, circle.center.t), circle.radius)
        res = tangency_residual(circle, conic)
        if not res < CERTIFY_TOL:
            raise NoTangentConic(f"{member} fails the tangency certificate: {res:.3e}")
        family = (
            Family.HYPERBOLIC_APOLLONIAN if member.pencil is Pencil.HYPERBOLIC else Family.ELLIPTIC_APOLLONIAN
        )
        fn = _circle_fn(circle)
        us, pts = trace(fn, 0.0, 2.0 * math.pi, ppu)
        polylines += [Polyline(family, run) for run in clip_runs(fn, us, pts, viewport)]
    return SvgScene(tuple(viewport), polylines, ppu, f"tangency k1={k1!r}")


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def scene_to_svg(scene: SvgScene) -> str:
    x0, x1, y0, y1 = scene.viewport
    k = scene.ppu
    width, height = (x1 - x0) * k, (y1 - y0) * k

    def px(x, y):
        return _fmt((x - x0) * k), _fmt((y1 - y) * k)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    if scene.title:
        out.append(f"<title>{scene.title}</title>")
    out.append("<style>")
    out.append("polyline{fill:none;stroke-width:1.2}")
    out.append(".axis{stroke:#000;stroke-width:0.6}")
    for fam, color in STYLE.items():
        out.append(f".{fam.value}{{stroke:{color}}}")
    out.append("</style>")
    out.append(f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="#fff"/>')
    if y0 <= 0.0 <= y1:
        a, b = px(x0, 0.0), px(x1, 0.0)
        out.append(f'<line class="axis" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>')
    if x0 <= 0.0 <= x1:
        a, b = px(0.0, y0), px(0.0, y1)
        out.append(f'<line class="axis" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>')
    for pl in scene.polylines:
        coords = " ".join(",".join(px(x, y)) for x, y in pl.points)
        out.append(f'<polyline class="{pl.family.value}" points="{coords}"/>')
    for fx in (-1.0, 1.0):
        if x0 <= fx <= x1 and y0 <= 0.0 <= y1:
            cx, cy = px(fx, 0.0)
            out.append(f'<circle class="focus" cx="{cx}" cy="{cy}" r="3" fill="#000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


LN2 = math.log(2.0)

# Lattice presets for the four web figures; step ln 2, windows picked so each
# family shows at least five curves.
PRESETS = {
    WebId.W1: LatticeSpec(WebId.W1, LN2, (0.5 * LN2, 0.5 * LN2), None, (0.02, 3.5, -3.5, 3.5), None, 100.0),
    WebId.W2: LatticeSpec(WebId.W2, LN2, (0.5 * LN2, -0.5 * LN2), None, (0.02, 3.5, -3.5, -0.02), None, 60.0),
    WebId.W3: LatticeSpec(WebId.W3, LN2, (0.05, -0.05), None, (0.01, 3.0, -3.0, -0.01), None, 40.0),
    WebId.W4: LatticeSpec(WebId.W4, LN2, (0.05, -0.05), None, (-3.0, 3.0, -3.5, -0.01), None, 100.0),
}


def write_svg(scene: SvgScene, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(scene.to_svg())
