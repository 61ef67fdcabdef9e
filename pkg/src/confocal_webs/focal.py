"""Focal distances, the four focal coordinates and their level curves.

The foci are fixed at F1 = (-1, 0) and F2 = (1, 0).  For a point P = (s, t)
with distances a = |PF1|, b = |PF2| the focal coordinates are

    f = a / b                      (hyperbolic Apollonian circles)
    g = (a^2 + b^2 - 4) / (2ab)    (circles through both foci)
    h = a - b                      (confocal hyperbolas)
    e = a + b                      (confocal ellipses)

Several of these lose all their digits near the axes when evaluated naively
(``a - b`` with a ~ b, ``e - 2`` near the focal segment).  The helpers below
use the rearrangements a^2 - b^2 = 4s and a - (s + 1) = t^2 / (a + s + 1),
which are exact and free of cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateTarget, FocusCoincidence, OutOfRange, OutsideQuadrant

F1 = (-1.0, 0.0)
F2 = (1.0, 0.0)

# measures within this distance of a boundary of their range are treated as
# lying on the boundary
MEASURE_GUARD = 1e-12


@dataclass(frozen=True)
class Point:
    s: float
    t: float

    def __iter__(self):
        yield self.s
        yield self.t

    def in_quadrant(self) -> bool:
        return self.s > 0 and self.t > 0


class Axis(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    BOTH = "both"


class Family(str, Enum):
    HYPERBOLIC_APOLLONIAN = "HyperbolicApollonian"
    ELLIPTIC_APOLLONIAN = "EllipticApollonian"
    CONFOCAL_ELLIPSE = "ConfocalEllipse"
    CONFOCAL_HYPERBOLA = "ConfocalHyperbola"
    VERTICAL_LINE = "VerticalLine"
    HORIZONTAL_LINE = "HorizontalLine"


# which coordinate is constant along each family
FAMILY_MEASURE = {
    Family.HYPERBOLIC_APOLLONIAN: "f",
    Family.ELLIPTIC_APOLLONIAN: "g",
    Family.CONFOCAL_ELLIPSE: "e",
    Family.CONFOCAL_HYPERBOLA: "h",
    Family.VERTICAL_LINE: "s",
    Family.HORIZONTAL_LINE: "t",
}


@dataclass(frozen=True)
class FocalMeasures:
    a: float
    b: float
    f: float
    g: float
    h: float
    e: float

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("a", "b", "f", "g", "h", "e")}


def _require_quadrant(p: Point) -> None:
    if not (p.s > 0 and p.t > 0):
        raise OutsideQuadrant(f"point ({p.s!r}, {p.t!r}) is not in the open positive quadrant")


def focal_distances(p: Point) -> tuple[float, float]:
    """Distances from ``p`` to F1 and F2."""
    a = math.hypot(p.s + 1.0, p.t)
    b = math.hypot(p.s - 1.0, p.t)
    if a == 0.0 or b == 0.0:
        raise FocusCoincidence(f"point ({p.s!r}, {p.t!r}) coincides with a focus")
    return a, b


def focal_gaps(s, t):
    """Cancellation-free focal quantities for quadrant points (array friendly).

    Returns a dict with ``a, b, e, h, ab`` and the boundary gaps
    ``e_minus_2`` (= e - 2) and ``four_minus_h2`` (= 4 - h^2).
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    a = np.hypot(s + 1.0, t)
    b = np.hypot(s - 1.0, t)
    e = a + b
    h = 4.0 * s / e
    t2 = t * t
    da = t2 / (a + s + 1.0)
    db = t2 / (b + np.abs(1.0 - s))
    e_minus_2 = da + db + 2.0 * np.maximum(s - 1.0, 0.0)
    e_minus_2s = da + db + 2.0 * np.maximum(1.0 - s, 0.0)
    four_minus_h2 = 4.0 * e_minus_2s * (e + 2.0 * s) / (e * e)
    return {
        "a": a,
        "b": b,
        "e": e,
        "h": h,
        "ab": a * b,
        "e_minus_2": e_minus_2,
        "four_minus_h2": four_minus_h2,
    }


def measure_arrays(s, t) -> dict[str, np.ndarray]:
    """Vectorised ``measures`` without domain checks; keys a, b, f, g, h, e, s, t."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    q = focal_gaps(s, t)
    a, b = q["a"], q["b"]
    # a^2 + b^2 - 4 = 2 (s^2 + t^2 - 1)
    g = (s * s + t * t - 1.0) / q["ab"]
    return {"a": a, "b": b, "f": a / b, "g": g, "h": q["h"], "e": q["e"], "s": s, "t": t}


def measures(p: Point) -> FocalMeasures:
    _require_quadrant(p)
    a, b = focal_distances(p)
    m = measure_arrays(p.s, p.t)
    return FocalMeasures(a=a, b=b, f=float(m["f"]), g=float(m["g"]), h=float(m["h"]), e=float(m["e"]))


def point_from_eh(e: float, h: float) -> Point:
    """Inverse elliptic coordinates: the quadrant point with a + b = e, a - b = h."""
    if not (e > 2.0 and 0.0 < h < 2.0):
        raise OutOfRange(f"need e > 2 and 0 < h < 2, got e={e!r}, h={h!r}")
    if e - 2.0 <= MEASURE_GUARD or h <= MEASURE_GUARD or 2.0 - h <= MEASURE_GUARD:
        raise DegenerateTarget(f"(e={e!r}, h={h!r}) lies on the quadrant boundary")
    s = e * h / 4.0
    radicand = (e - 2.0) * (e + 2.0) * (2.0 - h) * (2.0 + h)
    if radicand <= 0.0:
        raise DegenerateTarget(f"(e={e!r}, h={h!r}) lies on the quadrant boundary")
    return Point(s, math.sqrt(radicand) / 4.0)


def points_from_eh(e, h) -> tuple[np.ndarray, np.ndarray]:
    """Array version of :func:`point_from_eh` (no range checks)."""
    e = np.asarray(e, dtype=float)
    h = np.asarray(h, dtype=float)
    return e * h / 4.0, np.sqrt((e - 2.0) * (e + 2.0) * (2.0 - h) * (2.0 + h)) / 4.0


def reflect(p: Point, axis: Axis | str) -> Point:
    axis = Axis(axis)
    if axis is Axis.VERTICAL:
        return Point(-p.s, p.t)
    if axis is Axis.HORIZONTAL:
        return Point(p.s, -p.t)
    return Point(-p.s, -p.t)


@dataclass(frozen=True)
class CurveDescriptor:
    """Canonical parameters of one member of a curve family.

    ``params`` keys by family:

    - HyperbolicApollonian: center_x, radius
    - EllipticApollonian: center_y, radius
    - ConfocalEllipse / ConfocalHyperbola: A, B (hyperbola is the right branch)
    - VerticalLine: abscissa; HorizontalLine: ordinate
    """

    family: Family
    params: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> float:
        return self.params[key]

    def sample(self, n: int) -> np.ndarray:
        """``n`` points of the curve from its natural parametrisation, shape (n, 2)."""
        fam = self.family
        if fam is Family.HYPERBOLIC_APOLLONIAN:
            th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            r = self["radius"]
            return np.column_stack([self["center_x"] + r * np.cos(th), r * np.sin(th)])
        if fam is Family.ELLIPTIC_APOLLONIAN:
            th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            r = self["radius"]
            return np.column_stack([r * np.cos(th), self["center_y"] + r * np.sin(th)])
        if fam is Family.CONFOCAL_ELLIPSE:
            th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            return np.column_stack([self["A"] * np.cos(th), self["B"] * np.sin(th)])
        if fam is Family.CONFOCAL_HYPERBOLA:
            u = np.linspace(-3.0, 3.0, n)
            return np.column_stack([self["A"] * np.cosh(u), self["B"] * np.sinh(u)])
        if fam is Family.VERTICAL_LINE:
            v = np.linspace(0.0, 10.0, n)
            return np.column_stack([np.full(n, self["abscissa"]), v])
        v = np.linspace(0.0, 10.0, n)
        return np.column_stack([v, np.full(n, self["ordinate"])])


def hyperbolic_circle_params(mu: float) -> tuple[float, float]:
    """(center_x, radius) of the circle |XF1| / |XF2| = mu, mu > 0, mu != 1."""
    d = (mu - 1.0) * (mu + 1.0)
    return (mu * mu + 1.0) / d, abs(2.0 * mu / d)


def elliptic_circle_params(gamma: float) -> tuple[float, float]:
    """(center_y, radius) of the circle through both foci on which cos(F1 P F2) = gamma."""
    w = math.sqrt((1.0 - gamma) * (1.0 + gamma))
    return gamma / w, 1.0 / w


def curve_through(p: Point, family: Family | str) -> CurveDescriptor:
    family = Family(family)
    m = measures(p)
    if family is Family.HYPERBOLIC_APOLLONIAN:
        cx, r = hyperbolic_circle_params(m.f)
        return CurveDescriptor(family, {"center_x": cx, "radius": r})
    if family is Family.ELLIPTIC_APOLLONIAN:
        cy, r = elliptic_circle_params(m.g)
        return CurveDescriptor(family, {"center_y": cy, "radius": r})
    if family is Family.CONFOCAL_ELLIPSE:
        A = m.e / 2.0
        return CurveDescriptor(family, {"A": A, "B": math.sqrt((A - 1.0) * (A + 1.0))})
    if family is Family.CONFOCAL_HYPERBOLA:
        A = m.h / 2.0
        return CurveDescriptor(family, {"A": A, "B": math.sqrt((1.0 - A) * (1.0 + A))})
    if family is Family.VERTICAL_LINE:
        return CurveDescriptor(family, {"abscissa": p.s})
    return CurveDescriptor(family, {"ordinate": p.t})


def _normalized(value: float, gx: float, gy: float) -> float:
    gn = math.hypot(gx, gy)
    if gn == 0.0:
        return math.sqrt(abs(value))
    return abs(value) / gn


def residual(c: CurveDescriptor, p: Point) -> float:
    """Implicit-equation residual divided by the gradient norm at ``p``.

    Approximates the distance from ``p`` to the curve away from singular
    points.  Points of the left hyperbola branch get at least the vertex gap
    2A since the descriptor is the right branch only.
    """
    x, y = p.s, p.t
    fam = c.family
    if fam is Family.HYPERBOLIC_APOLLONIAN:
        dx = x - c["center_x"]
        return _normalized(dx * dx + y * y - c["radius"] ** 2, 2 * dx, 2 * y)
    if fam is Family.ELLIPTIC_APOLLONIAN:
        dy = y - c["center_y"]
        return _normalized(x * x + dy * dy - c["radius"] ** 2, 2 * x, 2 * dy)
    if fam is Family.CONFOCAL_ELLIPSE:
        A2, B2 = c["A"] ** 2, c["B"] ** 2
        return _normalized(x * x / A2 + y * y / B2 - 1.0, 2 * x / A2, 2 * y / B2)
    if fam is Family.CONFOCAL_HYPERBOLA:
        A2, B2 = c["A"] ** 2, c["B"] ** 2
        r = _normalized(x * x / A2 - y * y / B2 - 1.0, 2 * x / A2, -2 * y / B2)
        return r if x >= 0 else max(r, 2.0 * c["A"])
    if fam is Family.VERTICAL_LINE:
        return abs(x - c["abscissa"])
    return abs(y - c["ordinate"])
