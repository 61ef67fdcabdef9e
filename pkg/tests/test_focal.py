import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confocal_webs.errors import DegenerateTarget, FocusCoincidence, OutOfRange, OutsideQuadrant
from confocal_webs.focal import (
    Axis,
    CurveDescriptor,
    Family,
    Point,
    curve_through,
    focal_distances,
    measure_arrays,
    measures,
    point_from_eh,
    reflect,
    residual,
)

from oracles import angle_cosine, distances

coord = st.floats(min_value=1e-3, max_value=10.0, allow_nan=False)


def test_focal_distances_examples():
    assert focal_distances(Point(1, 1)) == pytest.approx((math.sqrt(5), 1.0), rel=1e-15)
    assert focal_distances(Point(3, 4)) == pytest.approx((4 * math.sqrt(2), 2 * math.sqrt(5)), rel=1e-15)
    for t in (0.1, 1.0, 7.5):
        a, b = focal_distances(Point(0.0, t))
        assert a == b


def test_focal_distances_rejects_focus():
    with pytest.raises(FocusCoincidence):
        focal_distances(Point(1.0, 0.0))
    with pytest.raises(FocusCoincidence):
        focal_distances(Point(-1.0, 0.0))


def test_measures_examples():
    m = measures(Point(1, 1))
    r5 = math.sqrt(5)
    assert (m.f, m.g, m.h, m.e) == pytest.approx((r5, 1 / r5, r5 - 1, r5 + 1), rel=1e-14)
    m = measures(Point(1, 2))
    assert (m.a, m.b, m.g) == pytest.approx((2 * math.sqrt(2), 2.0, 1 / math.sqrt(2)), rel=1e-14)
    m = measures(Point(2 * math.sqrt(2) / 3, 1 / 3))
    assert abs(m.g) < 1e-15


@pytest.mark.parametrize("p", [Point(0.0, 1.0), Point(1.0, 0.0), Point(-1.0, 2.0), Point(2.0, -1e-9)])
def test_measures_rejects_outside_quadrant(p):
    with pytest.raises(OutsideQuadrant):
        measures(p)


@settings(max_examples=300, deadline=None)
@given(coord, coord)
def test_measures_match_definitions(s, t):
    m = measures(Point(s, t))
    a, b = distances(s, t)
    assert m.a == pytest.approx(a, rel=1e-14)
    assert m.b == pytest.approx(b, rel=1e-14)
    assert m.f == pytest.approx(a / b, rel=1e-13)
    assert m.e == pytest.approx(a + b, rel=1e-14)
    assert m.h == pytest.approx(a - b, rel=1e-9, abs=1e-13)
    assert m.g == pytest.approx(angle_cosine(s, t), abs=1e-12)


def test_range_invariants_random_suite():
    rng = np.random.default_rng(2024)
    s, t = rng.uniform(1e-3, 10, 10_000), rng.uniform(1e-3, 10, 10_000)
    m = measure_arrays(s, t)
    assert np.all(m["f"] > 1)
    assert np.all((m["g"] > -1) & (m["g"] < 1))
    assert np.all((m["h"] > 0) & (m["h"] < 2))
    assert np.all(m["e"] > 2)


def _rel(u, v):
    return abs(u - v) / max(abs(u), abs(v))


@settings(max_examples=300, deadline=None)
@given(coord, coord)
def test_algebraic_identities(s, t):
    m = measures(Point(s, t))
    e, h = m.e, m.h
    assert _rel(m.f, (e + h) / (e - h)) <= 1e-12
    assert _rel(e * e - h * h, 4 * m.a * m.b) <= 1e-12
    assert abs(m.g - (e * e + h * h - 8) / (e * e - h * h)) <= 1e-12 * max(1.0, abs(m.g))


@settings(max_examples=200, deadline=None)
@given(coord, coord)
def test_symmetries(s, t):
    m = measure_arrays(s, t)
    mv = measure_arrays(-s, t)
    mh = measure_arrays(s, -t)
    mb = measure_arrays(-s, -t)
    assert float(m["f"] * mv["f"]) == pytest.approx(1.0, rel=1e-13)
    assert float(mv["g"]) == pytest.approx(float(m["g"]), abs=1e-14)
    assert float(mh["g"]) == pytest.approx(float(m["g"]), abs=1e-14)
    assert float(mv["h"]) == pytest.approx(-float(m["h"]), rel=1e-13)
    for other in (mv, mh, mb):
        assert float(other["e"]) == pytest.approx(float(m["e"]), rel=1e-15)


def test_reflect_examples():
    assert reflect(Point(1, 1), Axis.VERTICAL) == Point(-1, 1)
    assert reflect(Point(1, 1), "horizontal") == Point(1, -1)
    assert reflect(Point(1, 1), Axis.BOTH) == Point(-1, -1)
    p = reflect(Point(1, 1), Axis.VERTICAL)
    a, b = distances(p.s, p.t)
    assert a / b == pytest.approx(1 / math.sqrt(5), rel=1e-15)
    q = reflect(Point(3, 4), Axis.BOTH)
    assert sum(distances(q.s, q.t)) == pytest.approx(measures(Point(3, 4)).e, rel=1e-15)


def test_point_from_eh_examples():
    r5 = math.sqrt(5)
    p = point_from_eh(r5 + 1, r5 - 1)
    assert (p.s, p.t) == pytest.approx((1.0, 1.0), abs=1e-14)
    p = point_from_eh(4.0, 1.0)
    assert (p.s, p.t) == pytest.approx((1.0, 1.5), abs=1e-15)
    assert distances(1.0, 1.5) == pytest.approx((2.5, 1.5), rel=1e-15)


@pytest.mark.parametrize("e,h", [(2.0, 1.0), (1.5, 1.0), (3.0, 0.0), (3.0, 2.0), (3.0, -0.5)])
def test_point_from_eh_out_of_range(e, h):
    with pytest.raises(OutOfRange):
        point_from_eh(e, h)


def test_point_from_eh_degenerate():
    with pytest.raises(DegenerateTarget):
        point_from_eh(2.0 + 1e-13, 1e-13)
    with pytest.raises(DegenerateTarget):
        point_from_eh(5.0, 2.0 - 1e-14)


def test_point_from_eh_roundtrip_random_suite():
    rng = np.random.default_rng(7)
    for s, t in zip(rng.uniform(1e-3, 10, 10_000), rng.uniform(1e-3, 10, 10_000)):
        m = measures(Point(s, t))
        p = point_from_eh(m.e, m.h)
        assert abs(p.s - s) <= 1e-9 and abs(p.t - t) <= 1e-9


def test_curve_through_examples():
    c = curve_through(Point(2 * math.sqrt(2) / 3, 1 / 3), Family.ELLIPTIC_APOLLONIAN)
    assert abs(c["center_y"]) < 1e-15 and c["radius"] == pytest.approx(1.0, rel=1e-15)
    # (3, 0) and (1/3, 0) have ratio 2; (5/3, 4/3) is on that circle off the axis
    c = curve_through(Point(5 / 3, 4 / 3), Family.HYPERBOLIC_APOLLONIAN)
    a, b = distances(5 / 3, 4 / 3)
    assert a / b == pytest.approx(2.0, rel=1e-15)
    assert (c["center_x"], c["radius"]) == pytest.approx((5 / 3, 4 / 3), rel=1e-14)
    c = curve_through(Point(1, 1.5), Family.CONFOCAL_ELLIPSE)
    assert (c["A"], c["B"]) == pytest.approx((2.0, math.sqrt(3)), rel=1e-15)


def test_residual_examples():
    unit = CurveDescriptor(Family.ELLIPTIC_APOLLONIAN, {"center_y": 0.0, "radius": 1.0})
    assert residual(unit, Point(2 * math.sqrt(2) / 3, 1 / 3)) < 1e-12
    ell = CurveDescriptor(Family.CONFOCAL_ELLIPSE, {"A": 2.0, "B": math.sqrt(3)})
    assert residual(ell, Point(2.0, 0.01)) > 0
    hyp = CurveDescriptor(Family.HYPERBOLIC_APOLLONIAN, {"center_x": 5 / 3, "radius": 4 / 3})
    assert residual(hyp, Point(3.0, 0.0)) < 1e-12


def test_residual_left_branch_is_not_on_right_branch():
    hyp = CurveDescriptor(Family.CONFOCAL_HYPERBOLA, {"A": 0.6, "B": 0.8})
    assert residual(hyp, Point(-0.6, 0.0)) >= 1.2
    assert residual(hyp, Point(0.6, 0.0)) < 1e-15


@pytest.mark.parametrize("family", list(Family))
def test_curve_through_then_residual(family):
    rng = np.random.default_rng(11)
    for s, t in zip(rng.uniform(0.01, 8, 200), rng.uniform(0.01, 8, 200)):
        p = Point(s, t)
        c = curve_through(p, family)
        assert residual(c, p) <= 1e-12 * max(1.0, abs(s), abs(t))
        for x, y in c.sample(100):
            assert residual(c, Point(x, y)) <= 1e-9 * max(1.0, abs(x), abs(y))


def test_descriptor_invariants():
    rng = np.random.default_rng(3)
    for s, t in zip(rng.uniform(0.01, 8, 200), rng.uniform(0.01, 8, 200)):
        p = Point(s, t)
        ell = curve_through(p, Family.ELLIPTIC_APOLLONIAN)
        assert ell["center_y"] ** 2 + 1 == pytest.approx(ell["radius"] ** 2, rel=1e-12)
        hyp = curve_through(p, Family.HYPERBOLIC_APOLLONIAN)
        # the circle separates the foci: F2 inside, F1 outside
        assert abs(1 - hyp["center_x"]) < hyp["radius"] < abs(-1 - hyp["center_x"])
        ce = curve_through(p, Family.CONFOCAL_ELLIPSE)
        ch = curve_through(p, Family.CONFOCAL_HYPERBOLA)
        assert ce["A"] ** 2 - ce["B"] ** 2 == pytest.approx(1.0, rel=1e-12)
        assert ch["A"] ** 2 + ch["B"] ** 2 == pytest.approx(1.0, rel=1e-12)


def test_apollonian_canonical_forms_by_metric_property():
    rng = np.random.default_rng(5)
    for s, t in zip(rng.uniform(0.05, 5, 20), rng.uniform(0.05, 5, 20)):
        p = Point(s, t)
        m = measures(p)
        hyp = curve_through(p, Family.HYPERBOLIC_APOLLONIAN)
        ratios = [np.divide(*distances(x, y)) for x, y in hyp.sample(100)]
        assert np.allclose(ratios, m.f, rtol=1e-9)
        ell = curve_through(p, Family.ELLIPTIC_APOLLONIAN)
        # upper arc only: points below the focal axis see the supplementary angle
        cosines = [angle_cosine(x, y) for x, y in ell.sample(100) if y > 1e-6]
        assert np.allclose(cosines, m.g, atol=1e-9)
