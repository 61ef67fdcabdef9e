"""Numerical certificates for the four webs and the tangency construction.

Every check returns a :class:`VerificationReport`.  Sampling uses numpy's
PCG64 generator seeded per check, so identical arguments reproduce
identical ``max_error`` values bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidScale, LeftDomain
from .focal import Point, measure_arrays, points_from_eh
from .tangency import Pencil, PencilParam, scaled_circle, scaling_pair, tangency_residual
from .webs import (
    CLOSED_FORMS,
    DOMAIN_MARGIN,
    FUNCTIONAL,
    JACOBIAN_MARGIN,
    Direction,
    WebCoords,
    WebId,
    boundary_distance,
    domain_contains,
    forward,
    forward_xy,
    inverse,
    inverse_st,
    jacobian_xy,
)

TOL = 1e-9
DET_FLOOR = 1e-8

DEFAULT_LEVEL_SAMPLES = 10_000
DEFAULT_ROUNDTRIP_SAMPLES = 10_000
DEFAULT_JACOBIAN_SAMPLES = 1_000
DEFAULT_HEXAGONS = 100
DEFAULT_TANGENCY_MEMBERS = 100

TANGENCY_K1 = (0.3, 1.0 / math.sqrt(2.0), 0.9, 1.1, math.sqrt(2.0), 3.0)

# chart boxes (x_lo, x_hi, y_lo, y_hi) inside each domain used for sampling
SAMPLE_BOX = {
    WebId.W1: (0.05, 4.0, -4.0, 4.0),
    WebId.W2: (0.05, 4.0, -4.0, -0.05),
    WebId.W3: (0.05, 4.0, -4.0, -0.05),
    WebId.W4: (-4.0, 4.0, -4.0, -0.05),
}
JACOBIAN_BOX = {
    WebId.W1: (JACOBIAN_MARGIN, 4.0, -4.0, 4.0),
    WebId.W2: (JACOBIAN_MARGIN, 4.0, -4.0, -JACOBIAN_MARGIN),
    WebId.W3: (JACOBIAN_MARGIN, 4.0, -4.0, -JACOBIAN_MARGIN),
    WebId.W4: (-4.0, 4.0, -4.0, -JACOBIAN_MARGIN),
}

ForwardFn = Callable[[np.ndarray, np.ndarray], tuple]


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    web: str | None
    samples: int
    max_error: float
    tolerance: float
    passed: bool
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _report(name: str, web, samples: int, max_error: float, tolerance: float, seed: int) -> VerificationReport:
    if samples <= 0:
        raise ValueError("a report needs at least one sample")
    max_error = float(max_error)
    return VerificationReport(
        check_name=name,
        web=None if web is None else WebId.parse(web).value,
        samples=int(samples),
        max_error=max_error,
        tolerance=float(tolerance),
        passed=bool(max_error <= tolerance),
        seed=int(seed),
    )


def reports_to_json(reports: Iterable[VerificationReport], indent: int | None = None) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)


def relative_discrepancy(u, v):
    """|u - v| scaled by max(1, |u|, |v|): relative for large values, absolute near zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.abs(u - v) / np.maximum(1.0, np.maximum(np.abs(u), np.abs(v)))


def _forward_fn(web: WebId, override: ForwardFn | None) -> ForwardFn:
    if override is not None:
        return override
    return lambda x, y: forward_xy(web, x, y)


def _uniform_box(rng: np.random.Generator, box, n: int):
    x_lo, x_hi, y_lo, y_hi = box
    return rng.uniform(x_lo, x_hi, n), rng.uniform(y_lo, y_hi, n)


def sample_pairs(rng: np.random.Generator, box, direction: Direction, n: int):
    """``n`` pairs of chart points in ``box`` sharing the functional of ``direction``."""
    x_lo, x_hi, y_lo, y_hi = box
    x1, y1 = _uniform_box(rng, box, n)
    direction = Direction(direction)
    if direction is Direction.X_CONST:
        return (x1, y1), (x1.copy(), rng.uniform(y_lo, y_hi, n))
    if direction is Direction.Y_CONST:
        return (x1, y1), (rng.uniform(x_lo, x_hi, n), y1.copy())
    if direction is Direction.DIAG_MINUS:
        c = x1 - y1
        x2 = rng.uniform(np.maximum(x_lo, y_lo + c), np.minimum(x_hi, y_hi + c))
        return (x1, y1), (x2, x2 - c)
    c = x1 + y1
    x2 = rng.uniform(np.maximum(x_lo, c - y_hi), np.minimum(x_hi, c - y_lo))
    return (x1, y1), (x2, c - x2)


def level_set_discrepancy(web: WebId, direction: Direction, c1: WebCoords, c2: WebCoords) -> float:
    """Discrepancy of the measure attached to ``direction`` between two chart points."""
    web = WebId.parse(web)
    key = {d: k for d, k, _ in CLOSED_FORMS[web]}[Direction(direction)]
    m1 = measure_arrays(*forward(web, c1))[key]
    m2 = measure_arrays(*forward(web, c2))[key]
    return float(relative_discrepancy(m1, m2))


def verify_level_sets(
    web: WebId, n: int = DEFAULT_LEVEL_SAMPLES, seed: int = 0, forward: ForwardFn | None = None
) -> VerificationReport:
    """Pairs of chart points on a common line must share that line's measure."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    web = WebId.parse(web)
    fwd = _forward_fn(web, forward)
    rng = np.random.default_rng(seed)
    worst = 0.0
    total = 0
    for direction, key, _ in CLOSED_FORMS[web]:
        (x1, y1), (x2, y2) = sample_pairs(rng, SAMPLE_BOX[web], direction, n)
        m1 = measure_arrays(*fwd(x1, y1))[key]
        m2 = measure_arrays(*fwd(x2, y2))[key]
        worst = max(worst, float(np.max(relative_discrepancy(m1, m2))))
        total += n
    return _report("level_sets", web, total, worst, TOL, seed)


def verify_closed_forms(
    web: WebId,
    n: int = DEFAULT_LEVEL_SAMPLES,
    seed: int = 0,
    forward: ForwardFn | None = None,
    closed_forms: Sequence | None = None,
) -> VerificationReport:
    """Measures from raw focal distances against the chart's closed forms."""
    if n < 1:
        raise ValueError("need at least 1 sample")
    web = WebId.parse(web)
    fwd = _forward_fn(web, forward)
    laws = CLOSED_FORMS[web] if closed_forms is None else closed_forms
    rng = np.random.default_rng(seed)
    x, y = _uniform_box(rng, SAMPLE_BOX[web], n)
    m = measure_arrays(*fwd(x, y))
    worst = max(float(np.max(relative_discrepancy(m[key], law(x, y)))) for _, key, law in laws)
    return _report("closed_forms", web, n * len(laws), worst, TOL, seed)


def sample_measure_space(rng: np.random.Generator, n: int):
    """Quadrant points log-uniform in e - 2 and in h / (2 - h)."""
    e = 2.0 + 10.0 ** rng.uniform(-3.0, 1.7, n)
    h = 2.0 / (1.0 + 10.0 ** rng.uniform(-3.0, 3.0, n))
    return points_from_eh(e, h)


def verify_roundtrip(
    web: WebId, n: int = DEFAULT_ROUNDTRIP_SAMPLES, seed: int = 0, strict: bool = False
) -> VerificationReport:
    """forward(inverse(p)) = p and inverse(forward(c)) = c.

    Plane points come from two sets of size n (uniform on [1e-2, 10]^2 and
    log-uniform in measure space); chart points are n uniform samples of
    the web's sampling box.  Preimages outside the domain count as errors of
    the size of their violation.
    """
    if n < 1:
        raise ValueError("need at least 1 sample")
    web = WebId.parse(web)
    rng = np.random.default_rng(seed)
    s_u, t_u = rng.uniform(1e-2, 10.0, n), rng.uniform(1e-2, 10.0, n)
    s_m, t_m = sample_measure_space(rng, n)
    s = np.concatenate([s_u, s_m])
    t = np.concatenate([t_u, t_m])
    x, y = inverse_st(web, s, t)
    violation = np.maximum(0.0, DOMAIN_MARGIN - boundary_distance(web, x, y, strict))
    s2, t2 = forward_xy(web, x, y)
    worst = max(float(np.max(np.hypot(s2 - s, t2 - t))), float(np.max(violation)))

    cx, cy = _uniform_box(rng, SAMPLE_BOX[web], n)
    if strict:
        x_lo = max(SAMPLE_BOX[web][0], 0.05)
        cx = rng.uniform(x_lo, SAMPLE_BOX[web][1], n)
    x2, y2 = inverse_st(web, *forward_xy(web, cx, cy))
    worst = max(worst, float(np.max(np.hypot(x2 - cx, y2 - cy))))
    return _report("roundtrip", web, 3 * n, worst, TOL, seed)


def verify_jacobian(web: WebId, n: int = DEFAULT_JACOBIAN_SAMPLES, seed: int = 0) -> VerificationReport:
    """Finite-difference Jacobian determinant is bounded away from zero with one sign.

    ``max_error`` is DET_FLOOR / min(sign * det) (infinite on a sign change),
    so the check passes iff every |det| reaches the floor with a common sign.
    """
    if n < 1:
        raise ValueError("need at least 1 sample")
    web = WebId.parse(web)
    rng = np.random.default_rng(seed)
    x, y = _uniform_box(rng, JACOBIAN_BOX[web], n)
    det = np.linalg.det(jacobian_xy(web, x, y))
    sign = 1.0 if det[0] >= 0 else -1.0
    margin = float(np.min(sign * det))
    score = DET_FLOOR / margin if margin > 0 else math.inf
    return _report("jacobian", web, n, score, 1.0, seed)


def _meet(l_move, q, l_target, o):
    """Chart point with l_move = l_move(q) and l_target = l_target(o)."""
    (a1, b1), (a2, b2) = l_move, l_target
    r1 = a1 * q[0] + b1 * q[1]
    r2 = a2 * o[0] + b2 * o[1]
    det = a1 * b2 - a2 * b1
    return ((r1 * b2 - r2 * b1) / det, (a1 * r2 - a2 * r1) / det)


def hexagon_vertices(
    web: WebId,
    seed_point: Point,
    delta: float,
    directions: Sequence[Direction] = (Direction.X_CONST, Direction.Y_CONST, Direction.DIAG_MINUS),
    strict: bool = False,
) -> list[Point]:
    """The seven plane vertices A1..A7 of the Thomsen figure around ``seed_point``.

    A1 lies on the second family's leaf through the seed point, offset by
    ``delta`` in chart units.  Each move follows a leaf of one family from
    the current vertex until it meets the leaf of the next family through
    the seed point; every move goes plane -> chart (inverse) -> plane
    (forward).  For a hexagonal web A7 = A1.
    """
    web = WebId.parse(web)
    l1, l2, l3 = (FUNCTIONAL[Direction(d)] for d in directions)
    o = tuple(inverse(web, seed_point))
    # step along the l2 leaf through O
    start = WebCoords(o[0] + delta * l2[1], o[1] - delta * l2[0])
    if not domain_contains(web, start, strict):
        raise LeftDomain(f"hexagon vertex {start} leaves the {web.value} domain")
    verts = [forward(web, start, strict)]
    moves = ((l1, l3), (l2, l1), (l3, l2)) * 2
    for l_move, l_target in moves:
        o = tuple(inverse(web, seed_point))
        q = tuple(inverse(web, verts[-1]))
        c = WebCoords(*_meet(l_move, q, l_target, o))
        if not domain_contains(web, c, strict):
            raise LeftDomain(f"hexagon vertex {c} leaves the {web.value} domain")
        p = forward(web, c, strict)
        if not p.in_quadrant():
            raise LeftDomain(f"hexagon vertex {p} leaves the quadrant")
        verts.append(p)
    return verts


def hexagon_closure(
    web: WebId,
    seed_point: Point,
    delta: float,
    tol: float = TOL,
    directions: Sequence[Direction] = (Direction.X_CONST, Direction.Y_CONST, Direction.DIAG_MINUS),
    strict: bool = False,
) -> VerificationReport:
    verts = hexagon_vertices(web, seed_point, delta, directions, strict)
    gap = math.hypot(verts[-1].s - verts[0].s, verts[-1].t - verts[0].t)
    return _report("hexagon_closure", web, 6, gap, tol, 0)


def hexagon_triples(web: WebId) -> list[tuple[Direction, Direction, Direction]]:
    web = WebId.parse(web)
    triples = [(Direction.X_CONST, Direction.Y_CONST, Direction.DIAG_MINUS)]
    if web in (WebId.W3, WebId.W4):
        triples.append((Direction.X_CONST, Direction.Y_CONST, Direction.DIAG_PLUS))
    return triples


def verify_hexagons(web: WebId, n: int = DEFAULT_HEXAGONS, seed: int = 0) -> VerificationReport:
    """Closure of ``n`` random Thomsen hexagons per family triple."""
    if n < 1:
        raise ValueError("need at least 1 sample")
    web = WebId.parse(web)
    rng = np.random.default_rng(seed)
    x_lo, x_hi, y_lo, y_hi = SAMPLE_BOX[web]
    pad = 0.25
    worst = 0.0
    count = 0
    for triple in hexagon_triples(web):
        xs = rng.uniform(x_lo + pad, x_hi - pad, n)
        ys = rng.uniform(y_lo + pad, y_hi - pad, n)
        deltas = rng.uniform(0.01, 0.2, n)
        for x, y, d in zip(xs, ys, deltas):
            p = forward(web, WebCoords(float(x), float(y)))
            rep = hexagon_closure(web, p, float(d), directions=triple)
            worst = max(worst, rep.max_error)
            count += 1
    return _report("hexagon_closure", web, count, worst, TOL, seed)


def tangency_members(k1: float, n: int) -> list[PencilParam]:
    """Pencil members swept for scale ``k1``: both pencils when k1 < 1, elliptic only otherwise."""
    ds = [PencilParam(Pencil.ELLIPTIC, float(d)) for d in np.linspace(-10.0, 10.0, n)]
    if k1 < 1.0:
        mus = [PencilParam(Pencil.HYPERBOLIC, float(m)) for m in np.geomspace(1.01, 50.0, n)]
        return mus + ds
    return ds


def verify_tangency_sweep(k1: float, n: int = DEFAULT_TANGENCY_MEMBERS) -> VerificationReport:
    if k1 == 1.0 or not (k1 > 0.0):
        raise InvalidScale(f"invalid k1 {k1!r}")
    if n < 1:
        raise ValueError("need at least 1 member")
    pair = scaling_pair(k1)
    members = tangency_members(k1, n)
    worst = max(tangency_residual(scaled_circle(m, pair), pair.conic) for m in members)
    return _report(f"tangency_sweep[k1={k1!r}]", None, len(members), worst, TOL, 0)


CHECKS = ("level-sets", "closed-forms", "roundtrip", "jacobian", "hexagon", "tangency")


def run_suite(
    webs: Sequence[WebId] | None = None,
    seed: int = 42,
    samples: int | None = None,
    checks: Sequence[str] | None = None,
) -> list[VerificationReport]:
    """Run the selected checks in a fixed order: per web, then the tangency sweeps.

    ``samples`` overrides every default sample count.  Tangency sweeps run
    only when no web filter is given or ``checks`` names them explicitly.
    """
    webs = list(WebId) if webs is None else [WebId.parse(w) for w in webs]
    chosen = set(CHECKS if checks is None else checks)
    unknown = chosen - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")

    def size(default: int) -> int:
        return default if samples is None else samples

    reports = []
    for web in webs:
        if "level-sets" in chosen:
            reports.append(verify_level_sets(web, max(2, size(DEFAULT_LEVEL_SAMPLES)), seed))
        if "closed-forms" in chosen:
            reports.append(verify_closed_forms(web, size(DEFAULT_LEVEL_SAMPLES), seed))
        if "roundtrip" in chosen:
            reports.append(verify_roundtrip(web, size(DEFAULT_ROUNDTRIP_SAMPLES), seed))
        if "jacobian" in chosen:
            reports.append(verify_jacobian(web, size(DEFAULT_JACOBIAN_SAMPLES), seed))
        if "hexagon" in chosen:
            reports.append(verify_hexagons(web, size(DEFAULT_HEXAGONS), seed))
    if "tangency" in chosen and (len(webs) == len(WebId) or checks is not None):
        for k1 in TANGENCY_K1:
            reports.append(verify_tangency_sweep(k1, size(DEFAULT_TANGENCY_MEMBERS)))
    return reports
