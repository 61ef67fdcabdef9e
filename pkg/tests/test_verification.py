import json
import math

import numpy as np
import pytest

from confocal_webs.errors import LeftDomain
from confocal_webs.focal import Point, curve_through, measures, residual
from confocal_webs.verification import (
    CHECKS,
    SAMPLE_BOX,
    TANGENCY_K1,
    hexagon_closure,
    hexagon_triples,
    hexagon_vertices,
    level_set_discrepancy,
    relative_discrepancy,
    reports_to_json,
    run_suite,
    sample_measure_space,
    verify_closed_forms,
    verify_hexagons,
    verify_jacobian,
    verify_level_sets,
    verify_roundtrip,
    verify_tangency_sweep,
)
from confocal_webs.webs import CLOSED_FORMS, Direction, WebCoords, WebId, family_of_direction, forward

from conftest import LN2
from oracles import perturbed_forward


@pytest.mark.parametrize("web", list(WebId))
def test_literal_formulas_pass(web):
    assert verify_level_sets(web, 2000, seed=1, forward=perturbed_forward(web, (1, 1, 1))).passed
    assert verify_closed_forms(web, 2000, seed=1, forward=perturbed_forward(web, (1, 1, 1))).passed


@pytest.mark.parametrize("web", list(WebId))
@pytest.mark.parametrize("slot", [0, 1, 2])
def test_perturbed_constant_fails_level_sets(web, slot):
    k = [1.0, 1.0, 1.0]
    k[slot] += 1e-3
    with np.errstate(invalid="ignore"):
        rep = verify_level_sets(web, 2000, seed=1, forward=perturbed_forward(web, k))
        rep_cf = verify_closed_forms(web, 2000, seed=1, forward=perturbed_forward(web, k))
    assert not rep.passed
    assert not rep_cf.passed


@pytest.mark.parametrize("web", list(WebId))
def test_perturbed_closed_form_fails(web):
    bad = [(d, key, (lambda law: lambda x, y: 2.001 / 2.0 * law(x, y))(law)) for d, key, law in CLOSED_FORMS[web]]
    assert not verify_closed_forms(web, 500, seed=3, closed_forms=bad).passed


def test_reports_reproducible_bitwise():
    for web in WebId:
        for check in (verify_level_sets, verify_closed_forms, verify_roundtrip, verify_jacobian, verify_hexagons):
            r1 = check(web, 200, seed=9)
            r2 = check(web, 200, seed=9)
            assert r1 == r2
            assert r1.to_dict()["max_error"] == r2.to_dict()["max_error"]
    a = reports_to_json(run_suite(seed=5, samples=50))
    b = reports_to_json(run_suite(seed=5, samples=50))
    assert a == b


def test_w3_explicit_pair_shares_f():
    c1, c2 = WebCoords(LN2, -LN2), WebCoords(1.5 * LN2, -0.5 * LN2)
    assert level_set_discrepancy(WebId.W3, Direction.DIAG_MINUS, c1, c2) < 1e-12
    assert measures(forward(WebId.W3, c1)).f == pytest.approx(5 / 3, rel=1e-14)


def test_relative_discrepancy_floor():
    assert relative_discrepancy(1e-14, -1e-14) == pytest.approx(2e-14)
    assert relative_discrepancy(1e6, 1e6 + 1) == pytest.approx(1e-6, rel=1e-9)


def test_sample_measure_space_reaches_small_e():
    s, t = sample_measure_space(np.random.default_rng(0), 10_000)
    e = np.hypot(s + 1, t) + np.hypot(s - 1, t)
    assert np.any(e < 2 * math.sqrt(2))
    assert np.any(e < 2.01)
    assert np.all((s > 0) & (t > 0))


def test_strict_w4_roundtrip_fails_default_passes():
    assert verify_roundtrip(WebId.W4, 2000, seed=2).passed
    assert not verify_roundtrip(WebId.W4, 2000, seed=2, strict=True).passed


def test_hexagon_examples():
    rep = hexagon_closure(WebId.W1, Point(1.0, 1.0), 0.1)
    assert rep.passed and rep.max_error < 1e-9
    rep = hexagon_closure(WebId.W4, Point(math.sqrt(2), math.sqrt(1.5)), 0.05)
    assert rep.passed
    with pytest.raises(LeftDomain):
        hexagon_vertices(WebId.W2, Point(3.0, 0.01), 1.0)


@pytest.mark.parametrize("web", list(WebId))
def test_hexagon_vertices_lie_on_intended_leaves(web):
    seed = Point(1.2, 0.8)
    for triple in hexagon_triples(web):
        verts = hexagon_vertices(web, seed, 0.07, triple)
        # consecutive vertices share a leaf of the moving family, cycling l1, l2, l3
        for (p, q), d in zip(zip(verts, verts[1:]), list(triple) * 2):
            c = curve_through(p, family_of_direction(web, d))
            assert residual(c, q) < 1e-9
        assert len(verts) == 7
        assert math.dist(tuple(verts[0]), tuple(verts[-1])) < 1e-9


def test_jacobian_rejects_empty_sample():
    with pytest.raises(ValueError):
        verify_jacobian(WebId.W1, 0)


def test_tangency_sweep_reports():
    for k1 in TANGENCY_K1:
        rep = verify_tangency_sweep(k1, 100)
        assert rep.passed
        assert rep.samples == (200 if k1 < 1 else 100)


def test_run_suite_json_shape():
    reports = run_suite(seed=42, samples=30)
    data = json.loads(reports_to_json(reports))
    assert len(data) == 4 * 5 + len(TANGENCY_K1)
    assert set(data[0]) == {"check_name", "web", "samples", "max_error", "tolerance", "passed", "seed"}
    assert all(r["passed"] for r in data)
    only = run_suite([WebId.W2], seed=1, samples=20, checks=["roundtrip"])
    assert [r.check_name for r in only] == ["roundtrip"]
    with pytest.raises(ValueError):
        run_suite(checks=["nope"])
    assert set(CHECKS) >= {"hexagon", "tangency"}


def test_sample_boxes_are_inside_domains():
    from confocal_webs.webs import domain_contains

    for web, (x0, x1, y0, y1) in SAMPLE_BOX.items():
        for x in (x0, x1):
            for y in (y0, y1):
                assert domain_contains(web, WebCoords(x, y))
