import math

import numpy as np
import pytest

from orbitprox.elements import MutualConfig
from orbitprox.errors import DegenerateBranch
from orbitprox.nodal import (
    LinkingClass,
    classify,
    components_from,
    delta_components,
    delta_nod,
    delta_nod_array,
    monotonicity_probe,
    nodal_distances,
)


def test_circles_on_node_line():
    c = MutualConfig(1.0, 0.0, 1.0, 0.0, inc=math.pi / 2)
    assert delta_nod(c) == 0.0
    assert classify(c) is LinkingClass.CROSSING


def test_nodal_radii_values():
    c = MutualConfig(0.5, 0.5, 1.0, 0.2, omega=0.0, omega_prime=0.0)
    nd = nodal_distances(c)
    assert nd.r_plus == pytest.approx(0.5)
    assert nd.r_minus == pytest.approx(1.5)
    assert nd.r_plus_prime == pytest.approx(1.0)
    assert nd.r_minus_prime == pytest.approx(1.5)
    assert nd.d_plus == pytest.approx(0.5) and nd.d_minus == pytest.approx(0.0)


def test_parabola_at_apse_gives_infinite_radius():
    c = MutualConfig(0.5, 1.0, 1.0, 0.2, omega=0.0)
    nd = nodal_distances(c)
    assert nd.r_minus == math.inf and nd.d_minus == -math.inf
    assert delta_nod(c) == pytest.approx(abs(nd.d_plus))
    with pytest.raises(DegenerateBranch):
        monotonicity_probe(c)


def test_classification_cases():
    assert classify(MutualConfig(0.1, 0.1, 1.0, 0.2, omega=1.0)) is LinkingClass.INTERNAL_NODES
    assert classify(MutualConfig(3.0, 0.1, 1.0, 0.2, omega=1.0)) is LinkingClass.EXTERNAL_NODES
    # ascending node inside A', descending node outside
    c = MutualConfig(0.5, 0.8, 1.0, 0.0, omega=0.0)
    comp = delta_components(c)
    assert comp.delta_link_ii > 0
    assert classify(c) is LinkingClass.LINKED_II
    c = MutualConfig(0.5, 0.8, 1.0, 0.0, omega=math.pi)
    assert classify(c) is LinkingClass.LINKED_I
    assert classify(MutualConfig(0.5, 0.8, 1.0, 0.0, omega=math.pi), tol=1.0) is LinkingClass.CROSSING


def test_components_identity_small():
    comp = components_from(0.3, -0.2)
    assert comp.delta_int == -0.2 and comp.delta_ext == -0.3
    assert comp.delta_link == 0.2
    assert max(comp.delta_int, comp.delta_ext, comp.delta_link) == min(abs(0.3), abs(-0.2))


def test_monotonicity_probe_matches_finite_differences():
    c = MutualConfig(0.6, 0.4, 1.0, 0.3, omega=0.7, omega_prime=1.9)
    der = monotonicity_probe(c)
    h = 1e-6

    def dd(**kw):
        a = nodal_distances(c.replace(**{k: getattr(c, k) + h for k in kw}))
        b = nodal_distances(c.replace(**{k: getattr(c, k) - h for k in kw}))
        return (a.d_plus - b.d_plus) / (2 * h), (a.d_minus - b.d_minus) / (2 * h)

    p, m = dd(omega=1)
    assert der.dplus_domega == pytest.approx(p, rel=1e-6) and der.dminus_domega == pytest.approx(m, rel=1e-6)
    p, m = dd(omega_prime=1)
    assert der.dplus_domega_prime == pytest.approx(p, rel=1e-6)
    assert der.dminus_domega_prime == pytest.approx(m, rel=1e-6)
    p, m = dd(e=1)
    assert der.dplus_de == pytest.approx(p, rel=1e-6) and der.dminus_de == pytest.approx(m, rel=1e-6)


def test_array_version_matches_scalar():
    rng = np.random.default_rng(3)
    q, e, w = rng.uniform(0.1, 2, 50), rng.uniform(0, 1, 50), rng.uniform(0, 6, 50)
    wp = rng.uniform(0, 6, 50)
    arr = delta_nod_array(q, e, w, 1.0, 0.2, wp)
    for k in range(50):
        s = delta_nod(MutualConfig(q[k], e[k], 1.0, 0.2, w[k], wp[k]))
        assert arr[k] == pytest.approx(s, rel=1e-12, abs=1e-14)
