"""Closed-form optimal bounds of the nodal distance over element domains.

Each ``bounds_*`` function fixes a pair of elements of trajectory A (a point
of a coordinate plane), lets the remaining angular/eccentricity elements
range over their domain, and returns the minimum and maximum of the nodal
distance together with every intermediate piece.  Infinite pieces are
``math.inf`` / ``-math.inf``.

Plane domains (free elements in brackets):

* ``q-omega``  : q > 0, omega in [0, pi/2]   [e in [0, 1], omega' in [0, pi]]
* ``q-e``      : q > 0, e in [0, 1]          [omega in [0, pi/2], omega' in [0, pi)]
* ``q-omegap`` : q > 0, omega' in [0, pi/2]  [e in [0, 1], omega in [0, pi]]
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .elements import sym_cos
from .errors import NoAdmissibleRoot, NoPositiveRoot, NoRealRoot
from .polyroot import real_roots

INF = math.inf


class Plane(str, enum.Enum):
    Q_OMEGA = "q-omega"
    Q_E = "q-e"
    Q_OMEGA_PRIME = "q-omegap"


def _over(num: float, den: float) -> float:
    """``num / den`` with a zero denominator mapped to a signed infinity."""
    if den == 0.0:
        return math.copysign(INF, num)
    return num / den


@dataclass(frozen=True)
class BoundPieces:
    l_int: float
    l_ext: float
    u_int: float | None
    u_ext: float | None
    u_link: float | None
    xi_star_prime: float | None = None
    xi_star_prime_clamped: float | None = None
    e_star: float | None = None
    e_star_clamped: float | None = None
    omega_star: float | None = None
    #: distance of the e=1 (or I=pi/2, omega=pi/2) trajectory, for orbit-distance bounds
    delta_branch: float | None = None


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    pieces: BoundPieces
    plane: Plane
    circular_specialization: bool = False


def xi_star_prime(q: float, omega: float, p_prime: float) -> float:
    """Value of e' cos(omega') at which the two nodal distances agree for a
    parabolic A (e = 1)."""
    c = sym_cos(omega)
    if c == 0.0:
        return 0.0
    s2 = math.sin(omega) ** 2
    return 4.0 * q * c / (p_prime * s2 + math.sqrt((p_prime * s2) ** 2 + 16.0 * q * q * c * c))


def e_star(q: float, omega: float, q_prime: float, e_prime: float) -> tuple[float, float]:
    """Eccentricity at which d+ = -d- with omega' in {0, pi}; returns the raw
    value and its clamp to ``[0, 1]``."""
    c = sym_cos(omega)
    a = 1.0 - e_prime * e_prime
    pp = q_prime * (1.0 + e_prime)
    qa = q * a
    gap = pp - qa
    # the discriminant is a perfect square at its minimum (c^2 = 1, qa = 2pp)
    disc = max(0.0, qa * qa + 4.0 * pp * c * c * gap)
    es = 2.0 * gap / (qa + math.sqrt(disc))
    return es, max(0.0, min(es, 1.0))


def bounds_q_omega(q: float, omega: float, q_prime: float, e_prime: float) -> BoundReport:
    """Min/max of the nodal distance over (e, omega') for fixed (q, omega)."""
    c = sym_cos(omega)
    pp = q_prime * (1.0 + e_prime)
    Qp = pp / (1.0 - e_prime)
    two_q_minus = _over(2.0 * q, 1.0 - c)
    two_q_plus = 2.0 * q / (1.0 + c)

    l_int = q_prime - two_q_minus
    l_ext = q - Qp
    u_int = pp - q

    xs = xi_star_prime(q, omega, pp)
    xs_hat = min(xs, e_prime)
    u_ext = min(two_q_minus - pp / (1.0 - xs_hat), two_q_plus - q_prime)

    es, es_hat = e_star(q, omega, q_prime, e_prime)
    u_link = min(Qp - q * (1.0 + es_hat) / (1.0 + es_hat * c), two_q_minus - q_prime)

    pieces = BoundPieces(
        l_int=l_int, l_ext=l_ext, u_int=u_int, u_ext=u_ext, u_link=u_link,
        xi_star_prime=xs, xi_star_prime_clamped=xs_hat, e_star=es, e_star_clamped=es_hat,
    )
    return BoundReport(
        lower=max(0.0, l_int, l_ext),
        upper=max(u_int, u_ext, u_link),
        pieces=pieces,
        plane=Plane.Q_OMEGA,
        circular_specialization=e_prime == 0.0,
    )


def bounds_q_e(q: float, e: float, q_prime: float, e_prime: float) -> BoundReport:
    """Min/max of the nodal distance over (omega, omega') for fixed (q, e).

    Only the signs of the separate internal/external maxima are known in
    closed form; ``u_int``/``u_ext`` hold ``|p' - p|`` on the side where it is
    the maximum and ``None`` on the side where the maximum is negative.
    """
    p = q * (1.0 + e)
    pp = q_prime * (1.0 + e_prime)
    Qp = pp / (1.0 - e_prime)
    Q = INF if e == 1.0 else p / (1.0 - e)

    l_int = q_prime - Q
    l_ext = q - Qp
    u_link = min(Q - q_prime, Qp - q)
    gap = pp - p
    u_int = gap if gap >= 0.0 else None
    u_ext = -gap if gap <= 0.0 else None

    return BoundReport(
        lower=max(0.0, l_int, l_ext),
        upper=max(u_link, abs(gap)),
        pieces=BoundPieces(l_int=l_int, l_ext=l_ext, u_int=u_int, u_ext=u_ext, u_link=u_link),
        plane=Plane.Q_E,
        circular_specialization=e_prime == 0.0,
    )


def cos_omega_star(q: float, omega_prime: float, q_prime: float, e_prime: float) -> float:
    xp = e_prime * sym_cos(omega_prime)
    pp = q_prime * (1.0 + e_prime)
    w = 1.0 - xp * xp
    return pp * xp / (math.sqrt((q * w) ** 2 + (pp * xp) ** 2) + q * w)


def bounds_q_omega_prime(q: float, omega_prime: float, q_prime: float, e_prime: float) -> BoundReport:
    """Min/max of the nodal distance over (e, omega) for fixed (q, omega')."""
    xp = e_prime * sym_cos(omega_prime)
    pp = q_prime * (1.0 + e_prime)
    r_minus_p = pp / (1.0 - xp)
    r_plus_p = pp / (1.0 + xp)

    cs = cos_omega_star(q, omega_prime, q_prime, e_prime)
    l_ext = q - r_minus_p
    u_link = r_minus_p - q
    u_ext = 2.0 * q / (1.0 + cs) - r_plus_p
    u_int = r_plus_p - q

    pieces = BoundPieces(
        l_int=-INF, l_ext=l_ext, u_int=u_int, u_ext=u_ext, u_link=u_link,
        omega_star=math.acos(cs),
    )
    return BoundReport(
        lower=max(0.0, l_ext),
        upper=max(u_link, u_ext),
        pieces=pieces,
        plane=Plane.Q_OMEGA_PRIME,
        circular_specialization=e_prime == 0.0,
    )


def bounds(plane: Plane | str, x: float, y: float, q_prime: float, e_prime: float) -> BoundReport:
    """Dispatch on the plane; ``(x, y)`` are the plane coordinates."""
    plane = Plane(plane)
    if plane is Plane.Q_OMEGA:
        return bounds_q_omega(x, y, q_prime, e_prime)
    if plane is Plane.Q_E:
        return bounds_q_e(x, y, q_prime, e_prime)
    return bounds_q_omega_prime(x, y, q_prime, e_prime)


# -- auxiliary two-variable function --------------------------------------

def sym_D(xi: float, xi_prime: float, p: float, p_prime: float) -> float:
    return min(p_prime / (1.0 + xi_prime) - p / (1.0 + xi),
               p_prime / (1.0 - xi_prime) - p / (1.0 - xi))


def xi_star_of_xi(xi: float, p: float, p_prime: float) -> float:
    """The xi' in (-1, 1) balancing the two branches of :func:`sym_D`."""
    w = 1.0 - xi * xi
    return 2.0 * p * xi / (math.sqrt((p_prime * w) ** 2 + 4.0 * p * p * xi * xi) + p_prime * w)


@dataclass(frozen=True)
class SymSup:
    value: float
    attained: bool
    #: location of the maximum (or limit point) in xi
    xi: float


def lemma_sym_sup(p: float, p_prime: float) -> SymSup:
    """Supremum of :func:`sym_D` over the open square ``(-1, 1)^2``."""
    if p_prime >= p:
        return SymSup(p_prime - p, True, 0.0)
    return SymSup(0.5 * (p_prime - p), False, 1.0)


# -- circular reference orbit ---------------------------------------------

def bounds_circular_q_omega(q: float, omega: float, q_prime: float) -> BoundReport:
    c = sym_cos(omega)
    two_q_minus = _over(2.0 * q, 1.0 - c)
    l_int = q_prime - two_q_minus
    l_ext = q - q_prime
    u_int = q_prime - q
    u_ext = 2.0 * q / (1.0 + c) - q_prime
    es, es_hat = e_star(q, omega, q_prime, 0.0)
    u_link = min(q_prime - q * (1.0 + es_hat) / (1.0 + es_hat * c), two_q_minus - q_prime)
    return BoundReport(
        lower=max(0.0, l_int, l_ext),
        upper=max(u_int, u_ext),
        pieces=BoundPieces(l_int=l_int, l_ext=l_ext, u_int=u_int, u_ext=u_ext, u_link=u_link,
                           xi_star_prime=0.0, xi_star_prime_clamped=0.0,
                           e_star=es, e_star_clamped=es_hat),
        plane=Plane.Q_OMEGA,
        circular_specialization=True,
    )


def bounds_circular_q_e(q: float, e: float, q_prime: float) -> BoundReport:
    Q = INF if e == 1.0 else q * (1.0 + e) / (1.0 - e)
    gap = q_prime - q * (1.0 + e)
    u_link = min(q_prime - q, Q - q_prime)
    return BoundReport(
        lower=max(0.0, q_prime - Q, q - q_prime),
        upper=max(u_link, abs(gap)),
        pieces=BoundPieces(l_int=q_prime - Q, l_ext=q - q_prime,
                           u_int=gap if gap >= 0.0 else None,
                           u_ext=-gap if gap <= 0.0 else None,
                           u_link=u_link),
        plane=Plane.Q_E,
        circular_specialization=True,
    )


def delta_omega_cubic(q: float, omega: float, q_prime: float) -> tuple[float, ...]:
    """Ascending coefficients of the cubic for the closest point of the
    parabola (e = 1, I = pi/2) to the ascending node point of a circular A'."""
    c, s = sym_cos(omega), math.sin(omega)
    return (-8.0 * q_prime * q * q * s, 4.0 * q * (q + q_prime * c), 0.0, 1.0)


def _parabola_node_gap(q: float, c: float, s: float, q_prime: float, xi: float) -> float:
    return math.hypot(xi - q_prime * s, (xi * xi - 4.0 * q * q) / (4.0 * q) + q_prime * c)


def delta_omega_branch(q: float, omega: float, q_prime: float) -> float:
    """Distance from the parabola (e = 1, I = pi/2) to the ascending node
    point of the circle A' -- the classical closed form, whose cubic has a
    unique real root for omega in [0, pi/2]."""
    roots = real_roots(delta_omega_cubic(q, omega, q_prime))
    if len(roots) != 1:
        raise NoRealRoot(f"expected one real root, found {roots!r}")
    return _parabola_node_gap(q, sym_cos(omega), math.sin(omega), q_prime, roots[0])


def gv2013_delta_omega(q: float, omega: float, q_prime: float) -> float:
    """Orbit distance between a circle of radius q' and the parabola with
    pericenter q, argument omega and mutual inclination pi/2.

    With I = pi/2 the nearest circle point is one of the two node points;
    the descending one is handled by the mirror image omega -> pi - omega,
    whose cubic may have three real roots (all are stationary points, the
    closest is kept).
    """
    near = delta_omega_branch(q, omega, q_prime)
    c, s = -sym_cos(omega), math.sin(omega)
    far = min(_parabola_node_gap(q, c, s, q_prime, xi)
              for xi in real_roots((-8.0 * q_prime * q * q * s, 4.0 * q * (q + q_prime * c), 0.0, 1.0)))
    return min(near, far)


def delta_e_quartic(q: float, e: float, q_prime: float) -> tuple[float, ...]:
    ope = 1.0 + e
    return (
        -q_prime ** 2 * q * q * (1.0 - e * e) * ope ** 2,
        -2.0 * q_prime * q * q * e * e * ope ** 2,
        ope ** 2 * (q_prime ** 2 * (1.0 - e) ** 2 + q * q * e * e),
        2.0 * q_prime * e * e * (1.0 - e * e),
        e ** 4,
    )


def gv2013_delta_e(q: float, e: float, q_prime: float) -> float:
    """Orbit distance between a circle of radius q' and the conic (q, e)
    with I = omega = pi/2."""
    if e == 0.0:
        return abs(q_prime - q)
    roots = [r for r in real_roots(delta_e_quartic(q, e, q_prime)) if r > 0.0]
    if len(roots) != 1:
        raise NoPositiveRoot(f"expected one positive root, found {roots!r}")
    xi = roots[0]
    ope = 1.0 + e
    # height of the conic above the node line at abscissa xi (pericenter branch)
    rad = max(0.0, ope * (q * q * ope - xi * xi * (1.0 - e)))
    z = (xi * xi - q * q * ope ** 2) / (q * e * ope + math.sqrt(rad))
    return math.hypot(xi - q_prime, z)


def gv2013_dmin_bounds_q_omega(q: float, omega: float, q_prime: float) -> BoundReport:
    d = gv2013_delta_omega(q, omega, q_prime)
    return BoundReport(
        lower=max(0.0, q - q_prime),
        upper=max(q_prime - q, d),
        pieces=BoundPieces(l_int=-INF, l_ext=q - q_prime, u_int=q_prime - q, u_ext=None,
                           u_link=None, delta_branch=d),
        plane=Plane.Q_OMEGA,
        circular_specialization=True,
    )


def gv2013_dmin_bounds_q_e(q: float, e: float, q_prime: float) -> BoundReport:
    d = gv2013_delta_e(q, e, q_prime)
    Q = INF if e == 1.0 else q * (1.0 + e) / (1.0 - e)
    return BoundReport(
        lower=max(0.0, q_prime - Q, q - q_prime),
        upper=max(min(q_prime - q, Q - q_prime), d),
        pieces=BoundPieces(l_int=q_prime - Q, l_ext=q - q_prime, u_int=None, u_ext=None,
                           u_link=min(q_prime - q, Q - q_prime), delta_branch=d),
        plane=Plane.Q_E,
        circular_specialization=True,
    )


# -- separating curves in the (q, omega) plane ----------------------------

def beta_curve_q(omega: float, q_prime: float) -> float:
    """q at which q' - q equals 2q/(1 + cos omega) - q'."""
    y = sym_cos(omega)
    return 2.0 * q_prime * (1.0 + y) / (3.0 + y)


def gamma_quartic(omega: float, q_prime: float) -> tuple[float, ...]:
    """Ascending coefficients (in q) of the curve where q' - q equals the
    parabola branch of the orbit-distance maximum."""
    y = sym_cos(omega)
    return (
        -2.0 * q_prime ** 4 * y ** 3,
        q_prime ** 3 * (y ** 3 + 13.0 * y * y + 9.0 * y - 27.0),
        -2.0 * q_prime ** 2 * (3.0 * y + 22.0) * (y - 1.0),
        2.0 * q_prime * (7.0 * y - 5.0),
        2.0,
    )


def gamma_curve_q(omega: float, q_prime: float) -> float:
    """Root of :func:`gamma_quartic` in (0, 2q'] closest to the beta curve."""
    target = beta_curve_q(omega, q_prime)
    cands = sorted(set(r for r in real_roots(gamma_quartic(omega, q_prime)) if 0.0 < r <= 2.0 * q_prime))
    if not cands:
        raise NoAdmissibleRoot(f"no root of the gamma quartic in (0, 2q'] at omega={omega!r}")
    return min(cands, key=lambda r: (abs(r - target), r))
