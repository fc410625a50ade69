"""Real roots of low-degree polynomials.

Roots are isolated between consecutive real critical points (the real roots
of the derivative, found recursively), bracketed, and polished by Newton
iteration.  Between two consecutive critical points the polynomial is
monotone, so each interval holds at most one simple root; a critical point
where the polynomial vanishes is a multiple root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.optimize import brentq

TRIM_TOL = 1e-14
MERGE_TOL = 1e-7


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending order of power: ``c[0] + c[1] x + ...``."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        c = [float(v) for v in self.coefficients]
        if not c:
            raise ValueError("empty coefficient list")
        big = max(abs(v) for v in c)
        if big == 0.0:
            raise ValueError("zero polynomial")
        while len(c) > 1 and abs(c[-1]) < TRIM_TOL * big:
            c.pop()
        if len(c) - 1 > 4:
            raise ValueError("degree above 4 is not supported")
        if len(c) < 2:
            raise ValueError("constant polynomial has no roots")
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "Polynomial":
        return cls(tuple(reversed([float(v) for v in coeffs])))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative_coefficients(self) -> tuple[float, ...]:
        return tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)

    def scale(self, x: float) -> float:
        """Magnitude used for residual tests at ``x``."""
        return max(abs(c) for c in self.coefficients) * max(1.0, abs(x)) ** self.degree


def _eval(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _cauchy_bound(coeffs: Sequence[float]) -> float:
    lead = coeffs[-1]
    return 1.0 + max(abs(c / lead) for c in coeffs[:-1])


def _newton_polish(coeffs, dcoeffs, x: float, lo: float, hi: float) -> float:
    for _ in range(8):
        fx = _eval(coeffs, x)
        dfx = _eval(dcoeffs, x)
        if fx == 0.0 or dfx == 0.0:
            break
        x_new = x - fx / dfx
        if not lo <= x_new <= hi:
            break
        if abs(_eval(coeffs, x_new)) >= abs(fx):
            break
        x = x_new
    return x


def _quadratic_roots(c0: float, c1: float, c2: float) -> list[float]:
    disc = c1 * c1 - 4.0 * c2 * c0
    scale = max(c1 * c1, abs(4.0 * c2 * c0))
    if disc < 0.0:
        if disc > -MERGE_TOL * MERGE_TOL * scale:
            disc = 0.0
        else:
            return []
    if disc == 0.0:
        x = -c1 / (2.0 * c2)
        return [x, x]
    s = math.sqrt(disc)
    t = -0.5 * (c1 + math.copysign(s, c1))
    r1 = t / c2
    r2 = c0 / t if t != 0.0 else -r1
    return sorted([r1, r2])


def _real_roots(coeffs: tuple[float, ...]) -> list[float]:
    deg = len(coeffs) - 1
    if deg == 1:
        return [-coeffs[0] / coeffs[1]]
    if deg == 2:
        return _quadratic_roots(*coeffs)
    dcoeffs = tuple(k * c for k, c in enumerate(coeffs) if k > 0)
    crit = sorted(set(_real_roots(dcoeffs)))
    bound = _cauchy_bound(coeffs)
    big = max(abs(c) for c in coeffs)

    def is_zero(x: float) -> bool:
        return abs(_eval(coeffs, x)) <= 1e-13 * big * max(1.0, abs(x)) ** deg

    roots: list[float] = []
    multiple = {}
    for c in crit:
        if is_zero(c):
            # multiplicity = 1 + multiplicity of c as a root of the derivative
            m = 2
            d2 = tuple(k * v for k, v in enumerate(dcoeffs) if k > 0)
            while len(d2) > 1 and abs(_eval(d2, c)) <= 1e-9 * max(abs(v) for v in d2) * max(1.0, abs(c)) ** (len(d2) - 1):
                m += 1
                d2 = tuple(k * v for k, v in enumerate(d2) if k > 0)
            multiple[c] = m
    edges = [-bound] + crit + [bound]
    for a, b in zip(edges[:-1], edges[1:]):
        if a in multiple or b in multiple:
            continue
        fa, fb = _eval(coeffs, a), _eval(coeffs, b)
        if fa == 0.0:
            if a == -bound:
                roots.append(a)
            continue
        if fb == 0.0:
            roots.append(b)
            continue
        if (fa < 0.0) != (fb < 0.0):
            x = brentq(lambda t: _eval(coeffs, t), a, b, xtol=1e-300, rtol=8.9e-16, maxiter=200)
            roots.append(_newton_polish(coeffs, dcoeffs, x, a, b))
    for c, m in multiple.items():
        roots.extend([c] * m)
    roots.sort()
    return roots


def real_roots(poly: Polynomial | Sequence[float]) -> list[float]:
    """All real roots in ascending order, repeated according to multiplicity.

    ``poly`` is a :class:`Polynomial` or an ascending coefficient sequence.
    """
    if not isinstance(poly, Polynomial):
        poly = Polynomial(tuple(poly))
    roots = _real_roots(poly.coefficients)
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= MERGE_TOL * max(1.0, abs(r)) and r != merged[-1]:
            # two nearly coincident simple roots: collapse to a double root
            mid = 0.5 * (r + merged[-1])
            merged[-1] = mid
            merged.append(mid)
        else:
            merged.append(r)
    return merged


def positive_roots(poly: Polynomial | Sequence[float]) -> list[float]:
    return [r for r in real_roots(poly) if r > 0.0]
