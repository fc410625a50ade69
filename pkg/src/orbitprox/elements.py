"""Orbital element containers and the reduction to mutual elements.

Angles are radians throughout.  Extended reals are plain floats: ``math.inf``
stands for the infinite apocenter of a parabola and for infinite nodal radii.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoplanarOrbits

PI = math.pi
TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

#: sin(angle between orbit normals) below this is treated as coplanar
COPLANAR_TOL = 1e-12


def reduce_angle(x: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``.

    ``math.fmod`` is exact, so non-negative inputs incur no rounding.
    """
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
        if r >= TWO_PI:
            r = 0.0
    return r


def fold_angle(x: float) -> float:
    """Fold an angle into ``[0, pi]`` using ``x -> -x`` and ``x -> 2*pi - x``.

    Every subtraction here is exact (Sterbenz), which is what makes nodal
    quantities bit-identical across the symmetry maps.
    """
    a = math.fmod(abs(x), TWO_PI)
    if a > PI:
        a = TWO_PI - a
    return a


def sym_cos(x: float) -> float:
    """Cosine evaluated on the folded representative of ``x``.

    ``sym_cos(pi - x) == -sym_cos(x)`` holds bit-for-bit whenever ``pi - x``
    is exactly representable.
    """
    a = fold_angle(x)
    if a > HALF_PI:
        return -math.cos(PI - a)
    if a == HALF_PI:
        return 0.0
    return math.cos(a)


@dataclass(frozen=True)
class CometaryElements:
    """Heliocentric cometary elements ``(q, e, i, node, argperi)``."""

    q: float
    e: float
    i: float
    node: float
    argperi: float

    def __post_init__(self) -> None:
        if not self.q > 0.0:
            raise ValueError(f"pericenter distance must be positive, got {self.q!r}")
        if not self.e >= 0.0:
            raise ValueError(f"eccentricity must be non-negative, got {self.e!r}")
        object.__setattr__(self, "i", reduce_angle(self.i))
        object.__setattr__(self, "node", reduce_angle(self.node))
        object.__setattr__(self, "argperi", reduce_angle(self.argperi))

    def rotation(self) -> np.ndarray:
        """Matrix whose columns are the pericenter direction, the in-plane
        normal to it (direction of motion at pericenter) and the orbit normal."""
        cO, sO = math.cos(self.node), math.sin(self.node)
        ci, si = math.cos(self.i), math.sin(self.i)
        cw, sw = math.cos(self.argperi), math.sin(self.argperi)
        P = np.array([cO * cw - sO * sw * ci, sO * cw + cO * sw * ci, sw * si])
        Qv = np.array([-cO * sw - sO * cw * ci, -sO * sw + cO * cw * ci, cw * si])
        W = np.array([sO * si, -cO * si, ci])
        return np.column_stack([P, Qv, W])

    def position(self, f) -> np.ndarray:
        """Cartesian position(s) at true anomaly ``f`` (scalar or array)."""
        f = np.asarray(f, dtype=float)
        r = self.q * (1.0 + self.e) / (1.0 + self.e * np.cos(f))
        local = np.stack([r * np.cos(f), r * np.sin(f), np.zeros_like(f)], axis=-1)
        return local @ self.rotation().T


@dataclass(frozen=True)
class MutualConfig:
    """Mutual elements of a trajectory A relative to a bounded trajectory A'.

    ``omega`` and ``omega_prime`` are measured from the ascending mutual node;
    ``inc`` is the mutual inclination.
    """

    q: float
    e: float
    q_prime: float
    e_prime: float
    omega: float = 0.0
    omega_prime: float = 0.0
    inc: float = HALF_PI

    def __post_init__(self) -> None:
        if not self.q > 0.0 or not self.q_prime > 0.0:
            raise ValueError("pericenter distances must be positive")
        if not 0.0 <= self.e <= 1.0:
            raise ValueError(f"e must lie in [0, 1], got {self.e!r}")
        if not 0.0 <= self.e_prime < 1.0:
            raise ValueError(f"e_prime must lie in [0, 1), got {self.e_prime!r}")
        if not 0.0 < self.inc < PI:
            raise ValueError(f"inc must lie in (0, pi), got {self.inc!r}")

    @property
    def p(self) -> float:
        return self.q * (1.0 + self.e)

    @property
    def p_prime(self) -> float:
        return self.q_prime * (1.0 + self.e_prime)

    @property
    def Q(self) -> float:
        if self.e == 1.0:
            return math.inf
        return self.p / (1.0 - self.e)

    @property
    def Q_prime(self) -> float:
        return self.p_prime / (1.0 - self.e_prime)

    def replace(self, **changes) -> "MutualConfig":
        from dataclasses import replace

        return replace(self, **changes)

    def as_cometary(self) -> tuple[CometaryElements, CometaryElements]:
        """Representative elements in the mutual frame: x-axis toward the
        ascending mutual node, A' in the xy-plane."""
        A = CometaryElements(self.q, self.e, self.inc, 0.0, self.omega)
        Ap = CometaryElements(self.q_prime, self.e_prime, 0.0, 0.0, self.omega_prime)
        return A, Ap


def mutual_frame(E: CometaryElements, E_prime: CometaryElements) -> np.ndarray:
    """Rotation whose columns are the mutual frame axes in the input frame.

    The x-axis points to the ascending node of A on the plane of A', the
    z-axis along the angular momentum of A'.  Both orbits are oriented by
    their own angular momentum.
    """
    h = E.rotation()[:, 2]
    hp = E_prime.rotation()[:, 2]
    n = np.cross(hp, h)
    s = float(np.linalg.norm(n))
    if s < COPLANAR_TOL:
        raise CoplanarOrbits(f"orbit normals are parallel (sin = {s:.3e})")
    x = n / s
    y = np.cross(hp, x)
    return np.column_stack([x, y, hp])


def to_mutual(E: CometaryElements, E_prime: CometaryElements) -> MutualConfig:
    """Mutual elements of ``E`` relative to ``E_prime``.

    Raises :class:`CoplanarOrbits` when the orbital planes coincide.
    """
    if E_prime.e >= 1.0:
        raise ValueError("the reference trajectory must be bounded (e' < 1)")
    R = mutual_frame(E, E_prime)
    x, y, hp = R[:, 0], R[:, 1], R[:, 2]
    rot = E.rotation()
    P, h = rot[:, 0], rot[:, 2]
    Pp = E_prime.rotation()[:, 0]
    inc = math.atan2(float(np.linalg.norm(np.cross(hp, h))), float(hp @ h))
    omega = math.atan2(float(np.cross(x, P) @ h), float(x @ P))
    omega_prime = math.atan2(float(Pp @ y), float(Pp @ x))
    return MutualConfig(
        q=E.q,
        e=E.e,
        q_prime=E_prime.q,
        e_prime=E_prime.e,
        omega=reduce_angle(omega),
        omega_prime=reduce_angle(omega_prime),
        inc=inc,
    )


def canonicalize_angles(omega: float, omega_prime: float) -> tuple[float, float]:
    """Representative of ``(omega, omega_prime)`` in ``[0, pi/2] x [0, pi]``.

    Composes the maps ``w -> 2pi - w``, ``w' -> 2pi - w'`` and
    ``(w, w') -> (pi - w, pi - w')``, all of which leave the nodal distance
    unchanged.
    """
    a = fold_angle(omega)
    b = fold_angle(omega_prime)
    if a > HALF_PI:
        a = PI - a
        b = PI - b
    return a, b
