"""Linking-configuration regions of the coordinate planes and the zero-level
curves of the bound pieces that separate them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from skimage import measure

from .bounds import BoundReport, Plane, bounds
from .errors import EmptyCurve

PIECES = ("l_int", "l_ext", "u_int", "u_ext", "u_link")
#: numeric stand-in for infinite piece values on contour grids
BIG = 1e10


@dataclass(frozen=True)
class RegionLabel:
    only_internal: bool
    only_external: bool
    internal_possible: bool
    external_possible: bool
    linked_possible: bool
    crossing_possible: bool

    @property
    def code(self) -> int:
        """Bit mask: 1 only-internal, 2 only-external, 4 internal, 8 external,
        16 linked, 32 crossing."""
        bits = (self.only_internal, self.only_external, self.internal_possible,
                self.external_possible, self.linked_possible, self.crossing_possible)
        return sum(1 << k for k, b in enumerate(bits) if b)

    @classmethod
    def from_code(cls, code: int) -> "RegionLabel":
        return cls(*(bool(code >> k & 1) for k in range(6)))


def _positive(v: float | None) -> bool:
    return v is not None and v > 0.0


def label_from_report(report: BoundReport) -> RegionLabel:
    pc = report.pieces
    return RegionLabel(
        only_internal=report.plane is not Plane.Q_OMEGA_PRIME and pc.l_int > 0.0,
        only_external=pc.l_ext > 0.0,
        internal_possible=_positive(pc.u_int),
        external_possible=_positive(pc.u_ext),
        linked_possible=_positive(pc.u_link),
        crossing_possible=report.lower == 0.0,
    )


def classify_plane_point(plane: Plane | str, point, q_prime: float, e_prime: float) -> RegionLabel:
    """Which linking configurations occur as the free elements vary."""
    return label_from_report(bounds(plane, point[0], point[1], q_prime, e_prime))


def region_grid(plane: Plane | str, xs, ys, q_prime: float, e_prime: float) -> np.ndarray:
    """Region codes on the grid ``xs x ys`` (rows follow ``xs``)."""
    out = np.empty((len(xs), len(ys)), dtype=np.int64)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i, j] = classify_plane_point(plane, (float(x), float(y)), q_prime, e_prime).code
    return out


# -- zero-level curves -----------------------------------------------------

@dataclass(frozen=True)
class CurveSamples:
    curve_id: str
    points: tuple[tuple[float, float], ...]
    closed: bool

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)


def piece_function(plane: Plane | str, piece_id: str, q_prime: float, e_prime: float) -> Callable[[float, float], float]:
    """Scalar function whose sign change is the zero set of a bound piece.

    In the (q, e) plane only the sign of the internal/external maxima is
    known; both are represented by ``+-(p' - q(1 + e))``.
    """
    if piece_id not in PIECES:
        raise ValueError(f"unknown piece {piece_id!r}; expected one of {PIECES}")
    plane = Plane(plane)
    pp = q_prime * (1.0 + e_prime)
    if plane is Plane.Q_E and piece_id in ("u_int", "u_ext"):
        sign = 1.0 if piece_id == "u_int" else -1.0
        return lambda q, e: sign * (pp - q * (1.0 + e))

    def fn(x: float, y: float) -> float:
        return getattr(bounds(plane, x, y, q_prime, e_prime).pieces, piece_id)

    return fn


def _finite(v: float) -> float:
    return max(-BIG, min(BIG, v))


def _edge_root(fn, a, b, fa, fb) -> tuple[float, float]:
    """Zero of ``fn`` on the segment a -> b (2-vectors) with fa, fb of
    opposite sign or one of them zero."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    g = lambda t: _finite(fn(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))  # noqa: E731
    t = brentq(g, 0.0, 1.0, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _ambiguous_zeros(fn, xs, ys, V, depth: int) -> list[tuple[float, float]]:
    """Zeros hidden inside cells whose corners share a sign (tangencies),
    found by recursive quadrisection."""
    found: list[tuple[float, float]] = []

    def visit(x0, x1, y0, y1, c, level):
        vals = [c[0], c[1], c[2], c[3]]
        if min(vals) < 0.0 < max(vals) or 0.0 in vals:
            corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                fa, fb = vals[k], vals[(k + 1) % 4]
                if fa == 0.0 or fb == 0.0 or (fa < 0.0) != (fb < 0.0):
                    found.append(_edge_root(fn, a, b, fa, fb))
                    return
            return
        spread = max(vals) - min(vals)
        if level >= depth or min(abs(v) for v in vals) > 2.0 * spread:
            return
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        f = lambda x, y: _finite(fn(x, y))  # noqa: E731
        fm = {(xm, y0): f(xm, y0), (x1, ym): f(x1, ym), (xm, y1): f(xm, y1),
              (x0, ym): f(x0, ym), (xm, ym): f(xm, ym)}
        visit(x0, xm, y0, ym, (c[0], fm[(xm, y0)], fm[(xm, ym)], fm[(x0, ym)]), level + 1)
        visit(xm, x1, y0, ym, (fm[(xm, y0)], c[1], fm[(x1, ym)], fm[(xm, ym)]), level + 1)
        visit(xm, x1, ym, y1, (fm[(xm, ym)], fm[(x1, ym)], c[2], fm[(xm, y1)]), level + 1)
        visit(x0, xm, ym, y1, (fm[(x0, ym)], fm[(xm, ym)], fm[(xm, y1)], c[3]), level + 1)

    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            c = (V[i, j], V[i + 1, j], V[i + 1, j + 1], V[i, j + 1])
            if min(c) > 0.0 or max(c) < 0.0:
                visit(xs[i], xs[i + 1], ys[j], ys[j + 1], c, 0)
    return found


def trace_zero_curve(plane: Plane | str, piece_id: str, q_prime: float, e_prime: float,
                     window: tuple[float, float, float, float], resolution: int | tuple[int, int] = 200,
                     ambiguity_depth: int = 6) -> list[CurveSamples]:
    """Connected components of the zero set of a bound piece in ``window =
    (x0, x1, y0, y1)``.

    Marching squares locates the crossing edges; every vertex is then moved
    onto the exact zero along its grid edge by Brent's method.  Cells whose
    corners share a sign are searched recursively for tangential zeros only
    when no ordinary crossing exists.
    """
    plane = Plane(plane)
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if nx < 2 or ny < 2:
        raise ValueError("resolution must be at least 2 in each direction")
    x0, x1, y0, y1 = window
    xs, ys = np.linspace(x0, x1, nx), np.linspace(y0, y1, ny)
    fn = piece_function(plane, piece_id, q_prime, e_prime)
    V = np.array([[_finite(fn(float(x), float(y))) for y in ys] for x in xs])

    curves: list[CurveSamples] = []
    for k, contour in enumerate(measure.find_contours(V, 0.0)):
        pts = []
        for r, c in contour:
            i0, j0 = int(math.floor(r)), int(math.floor(c))
            if r == i0:  # vertex on an edge of constant x
                j1 = min(j0 + 1, ny - 1)
                a, b = (xs[i0], ys[j0]), (xs[i0], ys[j1])
                fa, fb = V[i0, j0], V[i0, j1]
            else:
                i1 = min(i0 + 1, nx - 1)
                a, b = (xs[i0], ys[j0]), (xs[i1], ys[j0])
                fa, fb = V[i0, j0], V[i1, j0]
            if fa == 0.0 or fb == 0.0 or (fa < 0.0) != (fb < 0.0):
                p = _edge_root(fn, a, b, fa, fb)
            else:
                p = (a[0] + (b[0] - a[0]) * (r - i0 if r != i0 else c - j0),
                     a[1] + (b[1] - a[1]) * (r - i0 if r != i0 else c - j0))
            pts.append((float(p[0]), float(p[1])))
        closed = len(contour) > 2 and bool(np.all(contour[0] == contour[-1]))
        curves.append(CurveSamples(f"{plane.value}:{piece_id}:{k}", tuple(pts), closed))
    if not curves:
        extra = _ambiguous_zeros(fn, xs, ys, V, ambiguity_depth)
        if extra:
            extra.sort()
            curves.append(CurveSamples(f"{plane.value}:{piece_id}:tangential", tuple(extra), False))
    if not curves:
        raise EmptyCurve(f"{piece_id} has no zero in window {window}")
    return curves


@dataclass(frozen=True)
class UExtStructure:
    """How well a traced zero set of u_ext in the (q, omega) plane matches
    the vertical segment q = p'/2, omega >= arccos e', joined to the branch
    2q/(1 + cos omega) = q'."""

    meeting_point: tuple[float, float]
    segment_deviation: float
    branch_deviation: float
    segment_samples: int
    covers_segment: bool


def u_ext_structure(curves: list[CurveSamples], q_prime: float, e_prime: float) -> UExtStructure:
    pp = q_prime * (1.0 + e_prime)
    w_meet = math.acos(e_prime)
    seg_dev, br_dev, nseg = 0.0, 0.0, 0
    ws = []
    for cv in curves:
        for q, w in cv.points:
            if w > w_meet:
                seg_dev = max(seg_dev, abs(q - 0.5 * pp))
                nseg += 1
                ws.append(w)
            elif w < w_meet and q > 0.5 * pp:
                br_dev = max(br_dev, abs(2.0 * q / (1.0 + math.cos(w)) - q_prime))
    covers = bool(ws) and min(ws) - w_meet < 0.05 and math.pi / 2 - max(ws) < 0.05
    return UExtStructure((0.5 * pp, w_meet), seg_dev, br_dev, nseg, covers)
