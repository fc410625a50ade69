import math

import numpy as np
import pytest

from orbitprox.bounds import (
    bounds,
    gv2013_dmin_bounds_q_e,
    gv2013_dmin_bounds_q_omega,
)
from orbitprox.dmin import (
    AnomalyPair,
    DminBudget,
    brute_max_min_delta_nod,
    max_dmin_over_domain,
    orbit_distance,
    orbit_distance_array,
    search_dmin_over_domain,
    squared_distance,
)
from orbitprox.elements import MutualConfig
from orbitprox.errors import PointAtInfinity
from orbitprox.nodal import delta_nod


def random_configs(rng, n, e_max=1.0):
    out = []
    for _ in range(n):
        out.append(MutualConfig(
            q=rng.uniform(0.05, 2.5), e=rng.uniform(0, e_max), q_prime=1.0, e_prime=rng.uniform(0, 0.5),
            omega=rng.uniform(0, 2 * math.pi), omega_prime=rng.uniform(0, 2 * math.pi),
            inc=rng.uniform(0.01, math.pi - 0.01)))
    return out


class TestSquaredDistance:
    def test_collinear_circles(self):
        c = MutualConfig(0.4, 0.0, 1.0, 0.0, inc=1.0)
        assert squared_distance(c, AnomalyPair(0.0, 0.0)) == pytest.approx(0.36)

    def test_matches_cartesian_embedding(self):
        rng = np.random.default_rng(2)
        for c in random_configs(rng, 200, e_max=0.99):
            A, Ap = c.as_cometary()
            f, g = rng.uniform(-3, 3, 2)
            x, xp = A.position(f), Ap.position(g)
            d2 = float(np.sum((x - xp) ** 2))
            scale = float(x @ x + xp @ xp)
            assert abs(squared_distance(c, AnomalyPair(f, g)) - d2) <= 1e-14 * scale * 4

    def test_point_at_infinity(self):
        with pytest.raises(PointAtInfinity):
            squared_distance(MutualConfig(0.5, 1.0, 1.0, 0.1), AnomalyPair(math.pi, 0.0))


class TestOrbitDistance:
    def test_crossing_circles(self):
        r = orbit_distance(MutualConfig(1.0, 0.0, 1.0, 0.0, inc=math.pi / 2))
        assert r.d_min < 1e-12

    def test_concentric_circles_any_inclination(self):
        for inc in (0.1, 0.7, math.pi / 2, 2.5):
            assert orbit_distance(MutualConfig(0.5, 0.0, 1.0, 0.0, inc=inc)).d_min == pytest.approx(0.5, abs=1e-12)

    def test_parabola_through_circle(self):
        r = orbit_distance(MutualConfig(0.5, 1.0, 1.0, 0.0, omega=math.pi / 2, inc=math.pi / 2))
        assert r.d_min < 1e-10

    def test_argmin_consistent(self):
        rng = np.random.default_rng(4)
        for c in random_configs(rng, 40):
            r = orbit_distance(c)
            assert math.sqrt(max(0.0, squared_distance(c, r.argmin))) == pytest.approx(r.d_min, abs=1e-12)
            assert r.evaluations > 0
            if c.e == 1.0:
                assert -math.pi < r.argmin.f < math.pi
            else:
                assert 0.0 <= r.argmin.f < 2 * math.pi

    def test_not_above_nodal_distance(self):
        rng = np.random.default_rng(8)
        cfgs = random_configs(rng, 1000)
        d = orbit_distance_array([c.q for c in cfgs], [c.e for c in cfgs], [c.omega for c in cfgs],
                                 [c.inc for c in cfgs], 1.0, [c.e_prime for c in cfgs],
                                 [c.omega_prime for c in cfgs])
        nod = np.array([delta_nod(c) for c in cfgs])
        assert np.all(d <= nod + 1e-9)

    def test_resolution_independence(self):
        rng = np.random.default_rng(9)
        for c in random_configs(rng, 40):
            a = orbit_distance(c, n=120).d_min
            b = orbit_distance(c, n=240).d_min
            assert abs(a - b) < 1e-9

    def test_inclination_reflection(self):
        rng = np.random.default_rng(10)
        for c in random_configs(rng, 30):
            # I -> pi - I with omega -> -omega (f -> -f) leaves the squared distance unchanged
            m = c.replace(inc=math.pi - c.inc, omega=-c.omega % (2 * math.pi))
            assert orbit_distance(m).d_min == pytest.approx(orbit_distance(c).d_min, abs=1e-10)

    def test_batch_independence(self):
        rng = np.random.default_rng(12)
        n = 50
        q, e, w = rng.uniform(0.1, 2, n), rng.uniform(0, 1, n), rng.uniform(0, 6, n)
        inc, wp = rng.uniform(0.1, 1.5, n), rng.uniform(0, 6, n)
        batch = orbit_distance_array(q, e, w, inc, 1.0, 0.2, wp)
        single = np.array([orbit_distance_array(q[k], e[k], w[k], inc[k], 1.0, 0.2, wp[k]) for k in range(n)])
        assert np.array_equal(batch, single)


class TestDomainSearch:
    SMALL = DminBudget(outer_n=16, coarse_anomaly_n=20, anomaly_n=36, top_k=6)

    @pytest.mark.parametrize("q,w", [(0.3, math.pi / 4), (0.5, 1.2), (0.9, 0.3), (1.4, 1.0), (0.7, 1.5)])
    def test_circular_q_omega_matches_closed_form(self, q, w):
        got = max_dmin_over_domain("q-omega", (q, w), 1.0, 0.0)
        assert got == pytest.approx(gv2013_dmin_bounds_q_omega(q, w, 1.0).upper, abs=2e-3)

    @pytest.mark.parametrize("q,e", [(0.5, 0.5), (0.3, 0.9), (1.2, 0.2), (0.8, 1.0)])
    def test_circular_q_e_matches_closed_form(self, q, e):
        got = max_dmin_over_domain("q-e", (q, e), 1.0, 0.0)
        assert got == pytest.approx(gv2013_dmin_bounds_q_e(q, e, 1.0).upper, abs=2e-3)

    @pytest.mark.parametrize("plane,pt", [("q-omega", (0.4, 1.0)), ("q-e", (0.6, 0.3)), ("q-omegap", (0.5, 0.3)),
                                          ("q-omegap", (1.6, 1.2))])
    def test_below_nodal_maximum(self, plane, pt):
        r = search_dmin_over_domain(plane, pt, 1.0, 0.2, self.SMALL)
        assert r.value <= brute_max_min_delta_nod(plane, pt, 1.0, 0.2)[1] + 1e-6
        assert r.evaluations > 0

    def test_deterministic(self):
        a = search_dmin_over_domain("q-omegap", (0.5, 0.3), 1.0, 0.2, self.SMALL)
        b = search_dmin_over_domain("q-omegap", (0.5, 0.3), 1.0, 0.2, self.SMALL)
        assert a == b


class TestBruteOracle:
    def test_q_omega_example(self):
        lo, hi = brute_max_min_delta_nod("q-omega", (0.4, math.pi / 3), 1.0, 0.2)
        assert 0.8 - 1e-3 <= hi <= 0.8 + 1e-12
        assert lo <= 1e-3

    def test_q_e_example(self):
        lo, hi = brute_max_min_delta_nod("q-e", (0.5, 0.5), 1.0, 0.2)
        assert 0.5 - 1e-3 <= hi <= 0.5 + 1e-12

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            brute_max_min_delta_nod("q-e", (0.5, 0.5), 1.0, 0.2, grid_n=10)

    def test_crossing_existence(self):
        rng = np.random.default_rng(13)
        for plane in ("q-omega", "q-e", "q-omegap"):
            for _ in range(10):
                x = rng.uniform(0.05, 2.0)
                y = rng.uniform(0, 1.0 if plane == "q-e" else math.pi / 2)
                if bounds(plane, x, y, 1.0, 0.25).lower == 0.0:
                    assert brute_max_min_delta_nod(plane, (x, y), 1.0, 0.25, grid_n=100)[0] <= 1e-3
