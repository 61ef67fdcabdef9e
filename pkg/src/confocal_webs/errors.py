"""Exception hierarchy.

Every domain failure derives from :class:`GeometryError` so the CLI can map
them all to exit status 1 with the class name as the error tag.
"""


class GeometryError(ValueError):
    """Base class for all domain errors raised by this package."""


class FocusCoincidence(GeometryError):
    pass


class OutsideQuadrant(GeometryError):
    pass


class OutOfRange(GeometryError):
    pass


class DegenerateTarget(GeometryError):
    pass


class OutsideDomain(GeometryError):
    pass


class BoundaryTooClose(GeometryError):
    pass


class UnsupportedDirection(GeometryError):
    pass


class DegeneratePencilMember(GeometryError):
    pass


class AxisMismatch(GeometryError):
    pass


class InvalidScale(GeometryError):
    pass


class NoTangentConic(GeometryError):
    pass


class LeftDomain(GeometryError):
    pass


class EmptyIntersection(GeometryError):
    pass
