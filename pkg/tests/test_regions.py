import math

import numpy as np
import pytest

from orbitprox.bounds import bounds
from orbitprox.elements import MutualConfig
from orbitprox.errors import EmptyCurve
from orbitprox.nodal import LinkingClass, classify
from orbitprox.regions import (
    RegionLabel,
    classify_plane_point,
    piece_function,
    region_grid,
    trace_zero_curve,
    u_ext_structure,
)

HALF = math.pi / 2


def test_only_internal_example():
    lab = classify_plane_point("q-omega", (0.1, HALF), 1.0, 0.2)
    assert lab.only_internal and lab.internal_possible
    assert not (lab.external_possible or lab.linked_possible or lab.crossing_possible)


def test_only_external():
    lab = classify_plane_point("q-e", (1.6, 0.3), 1.0, 0.2)
    assert lab.only_external and not lab.only_internal


def test_q_e_example():
    lab = classify_plane_point("q-e", (0.5, 0.5), 1.0, 0.2)
    assert lab.internal_possible and lab.linked_possible and lab.crossing_possible
    assert not lab.external_possible


def test_q_omegap_never_only_internal():
    for q in np.linspace(0.01, 2.5, 30):
        for w in np.linspace(0, HALF, 10):
            assert not classify_plane_point("q-omegap", (q, w), 1.0, 0.3).only_internal


def test_code_round_trip():
    for code in range(64):
        assert RegionLabel.from_code(code).code == code


def test_label_invariants():
    rng = np.random.default_rng(21)
    for plane, ymax in (("q-omega", HALF), ("q-e", 1.0), ("q-omegap", HALF)):
        for _ in range(300):
            x, y = rng.uniform(0.01, 2.5), rng.uniform(0, ymax)
            lab = classify_plane_point(plane, (x, y), 1.0, 0.2)
            assert not (lab.only_internal and lab.only_external)
            if lab.only_internal:
                assert lab.internal_possible and not (lab.external_possible or lab.linked_possible)
            if lab.only_external:
                assert not (lab.internal_possible or lab.linked_possible)
            assert lab.crossing_possible == (bounds(plane, x, y, 1.0, 0.2).lower == 0.0)
            if lab.linked_possible:
                pc = bounds(plane, x, y, 1.0, 0.2).pieces
                assert pc.l_int <= 0 and pc.l_ext <= 0


def test_region_pointwise_consistency():
    rng = np.random.default_rng(22)
    checked = 0
    for _ in range(400):
        q, w = rng.uniform(0.01, 2.5), rng.uniform(0, HALF)
        lab = classify_plane_point("q-omega", (q, w), 1.0, 0.2)
        if not (lab.only_internal or lab.only_external):
            continue
        want = LinkingClass.INTERNAL_NODES if lab.only_internal else LinkingClass.EXTERNAL_NODES
        for _ in range(100):
            c = MutualConfig(q, rng.uniform(0, 1), 1.0, 0.2, w, rng.uniform(0, 2 * math.pi))
            assert classify(c) is want
        checked += 1
    assert checked > 20


def test_region_grid_shape():
    g = region_grid("q-omega", np.linspace(0.1, 2, 5), np.linspace(0, HALF, 4), 1.0, 0.2)
    assert g.shape == (5, 4) and g[0, -1] & 1


def test_u_ext_zero_curve_structure():
    curves = trace_zero_curve("q-omega", "u_ext", 1.0, 0.2, (0.05, 2.0, 0.0, HALF), 200)
    s = u_ext_structure(curves, 1.0, 0.2)
    assert s.segment_deviation < 1e-6 and s.covers_segment
    assert s.branch_deviation < 1e-9
    pts = np.vstack([c.as_array() for c in curves])
    assert np.any(np.hypot(pts[:, 0] - 0.6, pts[:, 1] - 1.40) < 0.02)
    assert np.any(np.hypot(pts[:, 0] - 0.6, pts[:, 1] - HALF) < 1e-9)


def test_curve_points_on_zero_set_and_dense():
    fn = piece_function("q-omega", "u_ext", 1.0, 0.2)
    curves = trace_zero_curve("q-omega", "u_ext", 1.0, 0.2, (0.05, 2.0, 0.0, HALF), 100)
    diag = math.hypot(1.95 / 99, HALF / 99)
    for c in curves:
        a = c.as_array()
        assert np.all(np.hypot(*np.diff(a, axis=0).T) <= diag + 1e-12)
        for x, y in c.points:
            assert abs(fn(x, y)) < 1e-9


def test_u_link_zero_set_is_union_of_lower_pieces():
    win = (0.05, 2.0, 0.0, HALF)
    link = trace_zero_curve("q-omega", "u_link", 1.0, 0.2, win, 150)
    assert len(link) == 2
    f_int = piece_function("q-omega", "l_int", 1.0, 0.2)
    f_ext = piece_function("q-omega", "l_ext", 1.0, 0.2)
    for c in link:
        for x, y in c.points:
            assert min(abs(f_int(x, y)), abs(f_ext(x, y))) < 1e-9


def test_q_e_link_zero_set():
    link = trace_zero_curve("q-e", "u_link", 1.0, 0.2, (0.05, 2.0, 0.0, 1.0), 120)
    f_int = piece_function("q-e", "l_int", 1.0, 0.2)
    f_ext = piece_function("q-e", "l_ext", 1.0, 0.2)
    for c in link:
        for x, y in c.points:
            assert min(abs(f_int(x, y)), abs(f_ext(x, y))) < 1e-9


def test_q_omegap_u_ext_line():
    curves = trace_zero_curve("q-omegap", "u_ext", 1.0, 0.2, (0.05, 2.0, 0.0, HALF), 100)
    pts = np.vstack([c.as_array() for c in curves])
    assert np.max(np.abs(pts[:, 0] - 0.6)) < 1e-9


def test_empty_curve():
    with pytest.raises(EmptyCurve):
        trace_zero_curve("q-omega", "l_ext", 1.0, 0.2, (0.05, 1.0, 0.0, HALF), 20)


def test_tangential_zero_found():
    # u_int in the (q, e) plane reduces to p' - q(1+e); shift the window so the
    # zero sits exactly on a grid line and check the degenerate case is handled
    curves = trace_zero_curve("q-e", "u_int", 1.0, 0.2, (0.3, 1.2, 0.0, 1.0), 50)
    for c in curves:
        for q, e in c.points:
            assert q * (1 + e) == pytest.approx(1.2, abs=1e-9)


def test_unknown_piece():
    with pytest.raises(ValueError):
        piece_function("q-omega", "nope", 1.0, 0.2)
