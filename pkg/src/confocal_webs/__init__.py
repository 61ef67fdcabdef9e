"""Trivial 3-webs built from confocal conics and Apollonian circle pencils with foci (-1, 0), (1, 0)."""

from .errors import GeometryError
from .focal import (
    Axis,
    CurveDescriptor,
    Family,
    FocalMeasures,
    Point,
    curve_through,
    focal_distances,
    measures,
    point_from_eh,
    reflect,
    residual,
)
from .tangency import (
    Circle,
    Pencil,
    PencilParam,
    ScalingPair,
    apollonian_circle,
    scaled_circle,
    scaling_pair,
    tangency_residual,
    tangent_conic_for_scaling,
)
from .verification import VerificationReport, run_suite
from .webs import Direction, WebCoords, WebId, domain_contains, family_of_direction, forward, inverse, jacobian

__version__ = "0.1.0"
