import math

import numpy as np
import pytest

from orbitprox.elements import (
    CometaryElements,
    MutualConfig,
    canonicalize_angles,
    fold_angle,
    mutual_frame,
    reduce_angle,
    sym_cos,
    to_mutual,
)
from orbitprox.errors import CoplanarOrbits


def test_reduce_angle_range():
    for x in (-7.0, -1e-300, 0.0, 3.0, 2 * math.pi, 100.0):
        r = reduce_angle(x)
        assert 0.0 <= r < 2 * math.pi
        assert math.isclose(math.cos(r), math.cos(x), abs_tol=1e-12)


def test_fold_angle_and_sym_cos_symmetries():
    rng = np.random.default_rng(1)
    for x in rng.uniform(0, 2 * math.pi, 500):
        x = round(float(x) * 2**40) / 2**40
        assert 0.0 <= fold_angle(x) <= math.pi
        assert sym_cos(-x) == sym_cos(x)
        assert sym_cos(2 * math.pi - x) == sym_cos(x) or abs(sym_cos(2 * math.pi - x) - sym_cos(x)) < 1e-15
        if x <= math.pi:
            assert sym_cos(math.pi - x) == -sym_cos(x)
    assert sym_cos(math.pi / 2) == 0.0


def test_mutual_config_validation():
    MutualConfig(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        MutualConfig(-1.0, 0.1, 1.0, 0.1)
    with pytest.raises(ValueError):
        MutualConfig(1.0, 1.2, 1.0, 0.1)
    with pytest.raises(ValueError):
        MutualConfig(1.0, 0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        MutualConfig(1.0, 0.1, 1.0, 0.1, inc=0.0)


def test_apocenters():
    c = MutualConfig(0.5, 0.5, 1.0, 0.2)
    assert c.p == 0.75 and c.Q == pytest.approx(1.5)
    assert c.Q_prime == pytest.approx(1.5)
    assert MutualConfig(0.5, 1.0, 1.0, 0.2).Q == math.inf


def test_coplanar_rejected():
    E = CometaryElements(1.0, 0.1, 0.3, 0.4, 0.5)
    Ep = CometaryElements(2.0, 0.2, 0.3, 0.4, 1.5)
    with pytest.raises(CoplanarOrbits):
        to_mutual(E, Ep)


def test_to_mutual_reproduces_node_geometry():
    """The mutual frame reproduces positions: the ascending mutual node of A
    lies on the +x axis of the frame, and the nodal radii match those of the
    mutual elements."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        E = CometaryElements(rng.uniform(0.2, 3), rng.uniform(0, 0.95), rng.uniform(0.05, 3.0),
                             rng.uniform(0, 6.28), rng.uniform(0, 6.28))
        Ep = CometaryElements(rng.uniform(0.2, 3), rng.uniform(0, 0.9), rng.uniform(0.05, 3.0),
                              rng.uniform(0, 6.28), rng.uniform(0, 6.28))
        c = to_mutual(E, Ep)
        R = mutual_frame(E, Ep)
        # A at true anomaly -omega sits on the ascending mutual node
        x = E.position(-c.omega) @ R
        assert x[0] > 0 and abs(x[1]) < 1e-9 * np.linalg.norm(x) and abs(x[2]) < 1e-9 * np.linalg.norm(x)
        # A' at -omega' sits on the same ray
        xp = Ep.position(-c.omega_prime) @ R
        assert xp[0] > 0 and abs(xp[1]) < 1e-9 * np.linalg.norm(xp) and abs(xp[2]) < 1e-12
        # A moves upward (z increasing) through the ascending node
        x2 = E.position(-c.omega + 1e-4) @ R
        assert x2[2] > 0
        # inclination matches the angle between normals
        h, hp = E.rotation()[:, 2], Ep.rotation()[:, 2]
        assert math.isclose(math.cos(c.inc), float(h @ hp), abs_tol=1e-12)


def test_as_cometary_round_trip():
    c = MutualConfig(0.7, 0.3, 1.1, 0.2, omega=1.0, omega_prime=2.0, inc=0.8)
    back = to_mutual(*c.as_cometary())
    assert back.omega == pytest.approx(1.0, abs=1e-12)
    assert back.omega_prime == pytest.approx(2.0, abs=1e-12)
    assert back.inc == pytest.approx(0.8, abs=1e-12)


def test_canonicalize_angles():
    a, b = canonicalize_angles(2.5, 0.3)
    assert a == pytest.approx(math.pi - 2.5) and b == pytest.approx(math.pi - 0.3)
    a, b = canonicalize_angles(-0.4, 5.0)
    assert a == pytest.approx(0.4) and b == pytest.approx(2 * math.pi - 5.0)
