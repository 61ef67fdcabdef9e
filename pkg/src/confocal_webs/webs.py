"""The four web charts: domains, forward maps, closed-form inverses.

Each chart sends a domain of the (x, y) plane onto the open positive
quadrant so that the lines x = const, y = const, x - y = const (and for
W3/W4 also x + y = const) go to curves of fixed focal families.

Array functions (``forward_xy``, ``inverse_st``) do no validation and are
what the verification sweeps use; ``forward``/``inverse`` are the checked
scalar entry points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BoundaryTooClose, OutsideDomain, UnsupportedDirection
from .focal import Family, Point, _require_quadrant, focal_gaps

DOMAIN_MARGIN = 1e-12
JACOBIAN_MARGIN = 1e-5
JACOBIAN_REL_STEP = 1e-6


class WebId(str, Enum):
    W1 = "w1"  # Apollonian circles + confocal hyperbolas
    W2 = "w2"  # Apollonian circles + confocal ellipses
    W3 = "w3"  # confocal conics + hyperbolic pencil (+ vertical lines)
    W4 = "w4"  # confocal conics + elliptic pencil (+ horizontal lines)

    @classmethod
    def parse(cls, value) -> "WebId":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class Direction(str, Enum):
    X_CONST = "XConst"
    Y_CONST = "YConst"
    DIAG_MINUS = "DiagMinus"
    DIAG_PLUS = "DiagPlus"


# linear functional constant along the chart lines of each direction
FUNCTIONAL = {
    Direction.X_CONST: (1.0, 0.0),
    Direction.Y_CONST: (0.0, 1.0),
    Direction.DIAG_MINUS: (1.0, -1.0),
    Direction.DIAG_PLUS: (1.0, 1.0),
}


@dataclass(frozen=True)
class WebCoords:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


_FAMILIES = {
    WebId.W1: {
        Direction.X_CONST: Family.ELLIPTIC_APOLLONIAN,
        Direction.Y_CONST: Family.HYPERBOLIC_APOLLONIAN,
        Direction.DIAG_MINUS: Family.CONFOCAL_HYPERBOLA,
    },
    WebId.W2: {
        Direction.X_CONST: Family.ELLIPTIC_APOLLONIAN,
        Direction.Y_CONST: Family.HYPERBOLIC_APOLLONIAN,
        Direction.DIAG_MINUS: Family.CONFOCAL_ELLIPSE,
    },
    WebId.W3: {
        Direction.X_CONST: Family.CONFOCAL_ELLIPSE,
        Direction.Y_CONST: Family.CONFOCAL_HYPERBOLA,
        Direction.DIAG_MINUS: Family.HYPERBOLIC_APOLLONIAN,
        Direction.DIAG_PLUS: Family.VERTICAL_LINE,
    },
    WebId.W4: {
        Direction.X_CONST: Family.CONFOCAL_ELLIPSE,
        Direction.Y_CONST: Family.CONFOCAL_HYPERBOLA,
        Direction.DIAG_MINUS: Family.ELLIPTIC_APOLLONIAN,
        Direction.DIAG_PLUS: Family.HORIZONTAL_LINE,
    },
}


def directions(web: WebId) -> tuple[Direction, ...]:
    return tuple(_FAMILIES[WebId.parse(web)])


def family_of_direction(web: WebId, direction: Direction | str) -> Family:
    web = WebId.parse(web)
    direction = Direction(direction)
    try:
        return _FAMILIES[web][direction]
    except KeyError:
        raise UnsupportedDirection(f"{web.value} has no {direction.value} family") from None


def domain_box(web: WebId, strict: bool = False) -> tuple[float, float, float, float]:
    """Open chart domain as (x_lo, x_hi, y_lo, y_hi).

    W4 is the half plane y < 0; the quadrant x > 0 misses every target point
    with e < 2*sqrt(2).  ``strict=True`` restores the quadrant for W4.
    """
    web = WebId.parse(web)
    inf = math.inf
    if web is WebId.W1:
        return (0.0, inf, -inf, inf)
    if web is WebId.W4 and not strict:
        return (-inf, inf, -inf, 0.0)
    return (0.0, inf, -inf, 0.0)


def boundary_distance(web: WebId, x, y, strict: bool = False):
    x_lo, x_hi, y_lo, y_hi = domain_box(web, strict)
    return np.minimum.reduce(
        [np.asarray(x) - x_lo, x_hi - np.asarray(x), np.asarray(y) - y_lo, y_hi - np.asarray(y)]
    )


def domain_contains(web: WebId, c: WebCoords, strict: bool = False) -> bool:
    if not (math.isfinite(c.x) and math.isfinite(c.y)):
        return False
    return bool(boundary_distance(web, c.x, c.y, strict) > DOMAIN_MARGIN)


def forward_xy(web: WebId, x, y):
    """Chart map on arrays; returns (s, t).  Inputs are assumed in the domain."""
    web = WebId.parse(web)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ex, ey = np.exp(x), np.exp(y)
    if web is WebId.W1:
        den = ex + ey
        return ex * np.sqrt(1.0 + ey) / den, ey * np.sqrt(np.expm1(x)) / den
    if web is WebId.W2:
        # e^x - e^y written without cancellation
        den = -ex * np.expm1(y - x)
        return ex * np.sqrt(-np.expm1(y)) / den, ey * np.sqrt(np.expm1(x)) / den
    if web is WebId.W3:
        return np.exp(x + y), np.sqrt(np.expm1(2.0 * x) * -np.expm1(2.0 * y))
    return np.sqrt((1.0 + ex) * -np.expm1(y)), np.exp(0.5 * (x + y))


def inverse_st(web: WebId, s, t):
    """Closed-form inverse on arrays; returns (x, y).  Inputs are assumed in the quadrant."""
    web = WebId.parse(web)
    q = focal_gaps(s, t)
    ab, e, h = q["ab"], q["e"], q["h"]
    e2m4 = q["e_minus_2"] * (e + 2.0)  # e^2 - 4
    four_m_h2 = q["four_minus_h2"]
    # log1p keeps relative accuracy for coordinates near 0, where forward_xy
    # uses expm1; note 4ab = e^2 - h^2
    if web is WebId.W1:
        # e^x = 2 / (1 - g), e^y = ((f+1)/(f-1))^2 - 1
        return np.log1p(e2m4 / four_m_h2), np.log(4.0 * ab / (h * h))
    if web is WebId.W2:
        # e^x = 2 / (1 + g), e^y = 1 - ((f-1)/(f+1))^2
        return np.log1p(four_m_h2 / e2m4), np.log1p(-((h / e) ** 2))
    if web is WebId.W3:
        return np.log1p(q["e_minus_2"] / 2.0), np.log1p(-four_m_h2 / (2.0 * (2.0 + h)))
    # e^x = (e/2)^2 - 1, e^y = 1 - (h/2)^2
    return np.log(e2m4 / 4.0), np.log1p(-h * h / 4.0)


def forward(web: WebId, c: WebCoords, strict: bool = False) -> Point:
    web = WebId.parse(web)
    if not domain_contains(web, c, strict):
        raise OutsideDomain(f"({c.x!r}, {c.y!r}) is outside the {web.value} domain")
    s, t = forward_xy(web, c.x, c.y)
    return Point(float(s), float(t))


def inverse(web: WebId, p: Point, strict: bool = False) -> WebCoords:
    web = WebId.parse(web)
    _require_quadrant(p)
    x, y = inverse_st(web, p.s, p.t)
    c = WebCoords(float(x), float(y))
    if strict and not domain_contains(web, c, strict=True):
        raise OutsideDomain(
            f"preimage ({c.x!r}, {c.y!r}) of ({p.s!r}, {p.t!r}) is outside the strict {web.value} domain"
        )
    return c


def jacobian_xy(web: WebId, x, y):
    """Central-difference Jacobians on arrays, shape (..., 2, 2); rows (s, t), columns (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hx = JACOBIAN_REL_STEP * np.maximum(1.0, np.abs(x))
    hy = JACOBIAN_REL_STEP * np.maximum(1.0, np.abs(y))
    sp, tp = forward_xy(web, x + hx, y)
    sm, tm = forward_xy(web, x - hx, y)
    ds_dx, dt_dx = (sp - sm) / (2 * hx), (tp - tm) / (2 * hx)
    sp, tp = forward_xy(web, x, y + hy)
    sm, tm = forward_xy(web, x, y - hy)
    ds_dy, dt_dy = (sp - sm) / (2 * hy), (tp - tm) / (2 * hy)
    return np.stack([np.stack([ds_dx, ds_dy], -1), np.stack([dt_dx, dt_dy], -1)], -2)


def jacobian(web: WebId, c: WebCoords, strict: bool = False) -> np.ndarray:
    web = WebId.parse(web)
    if not domain_contains(web, c, strict):
        raise OutsideDomain(f"({c.x!r}, {c.y!r}) is outside the {web.value} domain")
    if boundary_distance(web, c.x, c.y, strict) < JACOBIAN_MARGIN:
        raise BoundaryTooClose(f"({c.x!r}, {c.y!r}) is within {JACOBIAN_MARGIN} of the boundary")
    return jacobian_xy(web, c.x, c.y)


def _w1_f(x, y):
    r = np.sqrt(1.0 + np.exp(y))
    return (r + 1.0) ** 2 / np.exp(y)  # (r + 1) / (r - 1)


def _w2_f(x, y):
    r = np.sqrt(-np.expm1(y))
    return (1.0 + r) ** 2 / np.exp(y)  # (1 + r) / (1 - r)


# Per web: (direction, measure key, closed form of that measure on the chart).
# Measure keys are those of focal.measure_arrays.
CLOSED_FORMS = {
    WebId.W1: (
        (Direction.Y_CONST, "f", _w1_f),
        (Direction.X_CONST, "g", lambda x, y: 1.0 - 2.0 * np.exp(-x)),
        (Direction.DIAG_MINUS, "h", lambda x, y: 2.0 / np.sqrt(1.0 + np.exp(y - x))),
    ),
    WebId.W2: (
        (Direction.Y_CONST, "f", _w2_f),
        (Direction.X_CONST, "g", lambda x, y: 2.0 * np.exp(-x) - 1.0),
        (Direction.DIAG_MINUS, "e", lambda x, y: 2.0 / np.sqrt(-np.expm1(y - x))),
    ),
    WebId.W3: (
        (Direction.X_CONST, "e", lambda x, y: 2.0 * np.exp(x)),
        (Direction.Y_CONST, "h", lambda x, y: 2.0 * np.exp(y)),
        (Direction.DIAG_MINUS, "f", lambda x, y: 1.0 / np.tanh(0.5 * (x - y))),
        (Direction.DIAG_PLUS, "s", lambda x, y: np.exp(x + y)),
    ),
    WebId.W4: (
        (Direction.X_CONST, "e", lambda x, y: 2.0 * np.sqrt(1.0 + np.exp(x))),
        (Direction.Y_CONST, "h", lambda x, y: 2.0 * np.sqrt(-np.expm1(y))),
        (Direction.DIAG_MINUS, "g", lambda x, y: np.tanh(0.5 * (x - y))),
        (Direction.DIAG_PLUS, "t", lambda x, y: np.exp(0.5 * (x + y))),
    ),
}
