"""Nodal radii, nodal distances and the linking classification of two orbits."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .elements import MutualConfig, sym_cos
from .errors import DegenerateBranch


def _radius(p: float, den: float) -> float:
    # den >= 0 always since e <= 1; den == 0 is the point at infinity
    if den == 0.0:
        return math.inf
    return p / den


@dataclass(frozen=True)
class NodalDistances:
    r_plus: float
    r_minus: float
    r_plus_prime: float
    r_minus_prime: float
    d_plus: float
    d_minus: float


@dataclass(frozen=True)
class DeltaComponents:
    delta_int: float
    delta_ext: float
    delta_link_i: float
    delta_link_ii: float
    delta_link: float


class LinkingClass(enum.Enum):
    INTERNAL_NODES = "internal"
    EXTERNAL_NODES = "external"
    LINKED_I = "linked-i"
    LINKED_II = "linked-ii"
    CROSSING = "crossing"


def nodal_radii(q, e, omega, q_prime, e_prime, omega_prime) -> tuple[float, float, float, float]:
    c = sym_cos(omega)
    cp = sym_cos(omega_prime)
    p = q * (1.0 + e)
    pp = q_prime * (1.0 + e_prime)
    ec = e * c
    epc = e_prime * cp
    return (
        _radius(p, 1.0 + ec),
        _radius(p, 1.0 - ec),
        pp / (1.0 + epc),
        pp / (1.0 - epc),
    )


def nodal_distances(c: MutualConfig) -> NodalDistances:
    rp, rm, rpp, rmp = nodal_radii(c.q, c.e, c.omega, c.q_prime, c.e_prime, c.omega_prime)
    return NodalDistances(rp, rm, rpp, rmp, rpp - rp, rmp - rm)


def delta_nod(c: MutualConfig) -> float:
    """Minimum of the absolute ascending and descending nodal distances."""
    nd = nodal_distances(c)
    return min(abs(nd.d_plus), abs(nd.d_minus))


def components_from(d_plus: float, d_minus: float) -> DeltaComponents:
    li = min(-d_plus, d_minus)
    lii = min(d_plus, -d_minus)
    return DeltaComponents(
        delta_int=min(d_plus, d_minus),
        delta_ext=min(-d_plus, -d_minus),
        delta_link_i=li,
        delta_link_ii=lii,
        delta_link=max(li, lii),
    )


def delta_components(c: MutualConfig) -> DeltaComponents:
    nd = nodal_distances(c)
    return components_from(nd.d_plus, nd.d_minus)


def classify(c: MutualConfig, tol: float = 0.0) -> LinkingClass:
    """Linking configuration of the pair; ``tol`` is the crossing band (length)."""
    if tol < 0.0:
        raise ValueError("tol must be non-negative")
    nd = nodal_distances(c)
    if min(abs(nd.d_plus), abs(nd.d_minus)) <= tol:
        return LinkingClass.CROSSING
    comp = components_from(nd.d_plus, nd.d_minus)
    if comp.delta_int > 0.0:
        return LinkingClass.INTERNAL_NODES
    if comp.delta_ext > 0.0:
        return LinkingClass.EXTERNAL_NODES
    if comp.delta_link_i > 0.0:
        return LinkingClass.LINKED_I
    return LinkingClass.LINKED_II


@dataclass(frozen=True)
class NodalDerivatives:
    dplus_domega: float
    dplus_domega_prime: float
    dminus_domega: float
    dminus_domega_prime: float
    dplus_de: float
    dminus_de: float


def monotonicity_probe(c: MutualConfig) -> NodalDerivatives:
    """Analytic partial derivatives of the nodal distances in omega, omega', e."""
    cw, sw = math.cos(c.omega), math.sin(c.omega)
    cwp, swp = math.cos(c.omega_prime), math.sin(c.omega_prime)
    e, ep = c.e, c.e_prime
    if e * cw == 1.0 or e * cw == -1.0:
        raise DegenerateBranch("a nodal radius is infinite (e cos omega = +-1)")
    p, pp = c.p, c.p_prime
    rp, rm = p / (1.0 + e * cw), p / (1.0 - e * cw)
    rpp, rmp = pp / (1.0 + ep * cwp), pp / (1.0 - ep * cwp)
    return NodalDerivatives(
        dplus_domega=-e * sw / (1.0 + e * cw) * rp,
        dplus_domega_prime=ep * swp / (1.0 + ep * cwp) * rpp,
        dminus_domega=e * sw / (1.0 - e * cw) * rm,
        dminus_domega_prime=-ep * swp / (1.0 - ep * cwp) * rmp,
        dplus_de=-c.q * (1.0 - cw) / (1.0 + e * cw) ** 2,
        dminus_de=-c.q * (1.0 + cw) / (1.0 - e * cw) ** 2,
    )


def nodal_distances_array(q, e, omega, q_prime, e_prime, omega_prime):
    """Vectorised ``(d_plus, d_minus)`` over broadcastable arrays."""
    q, e, omega = np.asarray(q, float), np.asarray(e, float), np.asarray(omega, float)
    c = np.cos(omega)
    cp = np.cos(omega_prime)
    p = q * (1.0 + e)
    pp = q_prime * (1.0 + e_prime)
    with np.errstate(divide="ignore"):
        rp = p / (1.0 + e * c)
        rm = p / (1.0 - e * c)
    rpp = pp / (1.0 + e_prime * cp)
    rmp = pp / (1.0 - e_prime * cp)
    return rpp - rp, rmp - rm


def delta_nod_array(q, e, omega, q_prime, e_prime, omega_prime) -> np.ndarray:
    dp, dm = nodal_distances_array(q, e, omega, q_prime, e_prime, omega_prime)
    return np.minimum(np.abs(dp), np.abs(dm))
