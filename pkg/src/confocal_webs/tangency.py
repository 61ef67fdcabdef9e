"""Scaled Apollonian circles and the confocal conic they all touch.

Scaling every circle through both foci by k1 about its own center, and every
hyperbolic-pencil circle by k2 with k1^2 + k2^2 = 1, produces circles that
all touch the confocal hyperbola with semi-axes (k1, k2).  For k1 > 1 the
scaled circles through the foci touch the confocal ellipse with semi-major
axis k1, sometimes at complex points.

Tangency is certified algebraically: eliminating one coordinate between the
circle and the conic leaves a quadratic whose discriminant vanishes exactly
when the two curves touch, whether the touching point is real or not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AxisMismatch, DegeneratePencilMember, InvalidScale, NoTangentConic
from .focal import CurveDescriptor, Family, Point, hyperbolic_circle_params

AXIS_TOL = 1e-12
CERTIFY_TOL = 1e-9
REAL_TOL = 1e-12


class Pencil(str, Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class PencilParam:
    """A pencil member: ratio mu for the hyperbolic pencil, center ordinate d for the elliptic one."""

    pencil: Pencil
    value: float


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float


@dataclass(frozen=True)
class ScalingPair:
    k1: float
    k2: float | None
    conic: CurveDescriptor


@dataclass(frozen=True)
class TangencyCertificate:
    residual: float
    axis: str  # coordinate kept in the quadratic: "x" or "y"
    root: float  # double-root value of the kept coordinate
    partner_square: float  # square of the eliminated coordinate at the root

    @property
    def real(self) -> bool:
        return self.partner_square >= -REAL_TOL


def apollonian_circle(p: PencilParam) -> Circle:
    """Hyperbolic members (mu > 1) enclose F2; their mirror images about the y-axis are the 1/mu circles."""
    if Pencil(p.pencil) is Pencil.HYPERBOLIC:
        mu = p.value
        if not (mu > 1.0) or not math.isfinite(mu):
            raise DegeneratePencilMember(f"ratio {mu!r} must be a finite number above 1")
        cx, r = hyperbolic_circle_params(mu)
        return Circle(Point(cx, 0.0), r)
    d = p.value
    return Circle(Point(0.0, d), math.sqrt(1.0 + d * d))


def scaled_circle(p: PencilParam, pair: ScalingPair) -> Circle:
    c = apollonian_circle(p)
    if Pencil(p.pencil) is Pencil.HYPERBOLIC:
        if pair.k2 is None:
            raise InvalidScale("hyperbolic-pencil scaling needs k2")
        k = pair.k2
    else:
        k = pair.k1
    return Circle(c.center, c.radius * k)


def _conic_axes(conic: CurveDescriptor) -> tuple[float, float, float]:
    if conic.family is Family.CONFOCAL_ELLIPSE:
        sigma = 1.0
    elif conic.family is Family.CONFOCAL_HYPERBOLA:
        sigma = -1.0
    else:
        raise ValueError(f"not a conic: {conic.family.value}")
    return conic["A"], conic["B"], sigma


def tangency_certificate(circle: Circle, conic: CurveDescriptor) -> TangencyCertificate:
    """Discriminant certificate for ``circle`` against ``conic``.

    The conic is x^2/A^2 + sigma y^2/B^2 = 1 (sigma = +1 ellipse, -1
    hyperbola).  Circles centred on the y-axis keep y, circles centred on the
    x-axis keep x.
    """
    A, B, sigma = _conic_axes(conic)
    A2, B2 = A * A, B * B
    cx, cy, r2 = circle.center.s, circle.center.t, circle.radius**2
    # a circle centred at the origin belongs to the elliptic pencil: keep y
    if abs(cx) <= AXIS_TOL:
        # x^2 = A^2 (1 - sigma y^2/B^2)
        lead = 1.0 - sigma * A2 / B2
        lin = -2.0 * cy
        const = cy * cy + A2 - r2
        axis = "y"
    elif abs(cy) <= AXIS_TOL:
        # y^2 = sigma B^2 (1 - x^2/A^2)
        lead = 1.0 - sigma * B2 / A2
        lin = -2.0 * cx
        const = cx * cx + sigma * B2 - r2
        axis = "x"
    else:
        raise AxisMismatch(f"circle center ({cx!r}, {cy!r}) is off both symmetry axes")
    disc = lin * lin - 4.0 * lead * const
    root = -lin / (2.0 * lead)
    if axis == "x":
        partner = sigma * B2 * (1.0 - root * root / A2)
    else:
        partner = A2 * (1.0 - sigma * root * root / B2)
    return TangencyCertificate(abs(disc) / (lead * lead), axis, root, partner)


def tangency_residual(circle: Circle, conic: CurveDescriptor) -> float:
    return tangency_certificate(circle, conic).residual


def _certification_members(mode_a: bool, n: int = 100) -> list[PencilParam]:
    if mode_a:
        half = n // 2
        mus = np.geomspace(1.01, 50.0, half)
        ds = np.linspace(-10.0, 10.0, n - half)
        return [PencilParam(Pencil.HYPERBOLIC, float(m)) for m in mus] + [
            PencilParam(Pencil.ELLIPTIC, float(d)) for d in ds
        ]
    return [PencilParam(Pencil.ELLIPTIC, float(d)) for d in np.linspace(-10.0, 10.0, n)]


def scaling_pair(k1: float, k2: float | None = None) -> ScalingPair:
    """Build and certify the fixed conic for the scale factors (k1, k2).

    Mode A (0 < k1 < 1): confocal hyperbola with semi-axes (k1, k2); k2
    defaults to sqrt(1 - k1^2).  Mode B (k1 > 1): confocal ellipse with
    semi-major axis k1.  Raises NoTangentConic when any of 100 pencil members
    fails the discriminant test.
    """
    if not (k1 > 0.0) or not math.isfinite(k1):
        raise InvalidScale(f"k1 must be positive, got {k1!r}")
    if k1 == 1.0:
        raise InvalidScale("k1 = 1 gives no tangent conic")
    mode_a = k1 < 1.0
    if mode_a:
        if k2 is None:
            k2 = math.sqrt((1.0 - k1) * (1.0 + k1))
        if not (k2 > 0.0):
            raise InvalidScale(f"k2 must be positive, got {k2!r}")
        conic = CurveDescriptor(Family.CONFOCAL_HYPERBOLA, {"A": k1, "B": k2})
    else:
        conic = CurveDescriptor(Family.CONFOCAL_ELLIPSE, {"A": k1, "B": math.sqrt((k1 - 1.0) * (k1 + 1.0))})
    pair = ScalingPair(k1, k2, conic)
    for member in _certification_members(mode_a):
        res = tangency_residual(scaled_circle(member, pair), conic)
        if not res < CERTIFY_TOL:
            raise NoTangentConic(f"member {member} misses the conic: residual {res:.3e}")
    return pair


def tangent_conic_for_scaling(k1: float, k2: float | None = None) -> CurveDescriptor:
    return scaling_pair(k1, k2).conic


def _conic_point(conic: CurveDescriptor, u):
    A, B, sigma = _conic_axes(conic)
    if sigma > 0:
        return A * np.cos(u), B * np.sin(u)
    # right branch; callers mirror x for the left one
    return A * np.cosh(u), B * np.sinh(u)


def geometric_gap(circle: Circle, conic: CurveDescriptor, grid: int = 4001) -> tuple[float, bool]:
    """Independent check of tangency in the real plane.

    Minimises sigma * (|P - C| - r) over the conic's parametrisation, where
    sigma is the side the conic lies on.  Returns (gap, crosses): gap is ~0
    for tangency, positive when the curves are disjoint; ``crosses`` is set
    when the conic visibly has points on both sides of the circle.
    """
    A, B, sig = _conic_axes(conic)
    cx, cy, r = circle.center.s, circle.center.t, circle.radius
    if sig > 0:
        lo, hi = -math.pi, math.pi
        branches = (1.0,)
    else:
        span = math.asinh((abs(cx) + abs(cy) + r + A) / B) + 1.0
        lo, hi = -span, span
        branches = (1.0, -1.0)
    best_gap = math.inf
    signs = []
    samples = []
    for br in branches:
        def signed(u, br=br):
            x, y = _conic_point(conic, u)
            return math.hypot(br * x - cx, y - cy) - r

        us = np.linspace(lo, hi, grid)
        x, y = _conic_point(conic, us)
        vals = np.hypot(br * x - cx, y - cy) - r
        samples.append((br, us, vals, signed))
        signs.append(vals)
    allv = np.concatenate(signs)
    side = 1.0 if np.median(allv) >= 0 else -1.0
    crosses = bool(np.any(side * allv < -1e-9))
    for br, us, vals, signed in samples:
        sv = side * vals
        i = int(np.argmin(sv))
        if 0 < i < len(us) - 1:
            res = minimize_scalar(
                lambda u: side * signed(u), bracket=(us[i - 1], us[i], us[i + 1]), method="golden"
            )
            gap = float(res.fun)
        else:
            gap = float(sv[i])
        best_gap = min(best_gap, gap)
    return best_gap, crosses
