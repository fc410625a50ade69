"""Numerical orbit distance between two confocal conics, and numerical
extremisation of the orbit distance and of the nodal distance over element
domains.

The orbit distance is the global minimum of the squared distance on the
anomaly torus.  It is found by a coarse grid in true anomalies, followed by
damped Newton refinement started from the smallest grid-local minima.  All
work is batched over configurations with numpy, and each configuration's
arithmetic is independent of the others in its batch.

This engine deliberately avoids the nodal geometry (no seeding at the node
points), so ``d_min <= delta_nod`` is a genuine check rather than a
consequence of construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import Plane
from .elements import HALF_PI, PI, TWO_PI, MutualConfig, reduce_angle
from .errors import PointAtInfinity
from .nodal import delta_nod_array

#: the far arc of an (almost) parabolic A is clipped where r exceeds this
#: multiple of max(Q', q, q')
CLIP_FACTOR = 10.0
CHUNK = 256


@dataclass(frozen=True)
class AnomalyPair:
    f: float
    f_prime: float


@dataclass(frozen=True)
class DminResult:
    d_min: float
    argmin: AnomalyPair
    evaluations: int


def _positions(p, e, w, cI, sI, f):
    """Cartesian points of A in the mutual frame (broadcasting)."""
    den = 1.0 + e * np.cos(f)
    r = p / den
    u = f + w
    cu, su = np.cos(u), np.sin(u)
    return r * cu, r * su * cI, r * su * sI


def squared_distance(c: MutualConfig, a: AnomalyPair) -> float:
    """Squared distance between the point of A at ``a.f`` and the point of
    A' at ``a.f_prime``."""
    den = 1.0 + c.e * math.cos(a.f)
    if den <= 0.0:
        raise PointAtInfinity(f"1 + e cos f = {den!r} <= 0")
    r = c.p / den
    rp = c.p_prime / (1.0 + c.e_prime * math.cos(a.f_prime))
    u, v = a.f + c.omega, a.f_prime + c.omega_prime
    cross = math.cos(u) * math.cos(v) + math.sin(u) * math.sin(v) * math.cos(c.inc)
    return r * r + rp * rp - 2.0 * r * rp * cross


# -- batched engine --------------------------------------------------------

@dataclass(frozen=True)
class _Batch:
    """Flat arrays describing a batch of configurations."""

    q: np.ndarray
    e: np.ndarray
    w: np.ndarray
    inc: np.ndarray
    qp: np.ndarray
    ep: np.ndarray
    wp: np.ndarray

    @classmethod
    def make(cls, q, e, w, inc, qp, ep, wp) -> "_Batch":
        arrs = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (q, e, w, inc, qp, ep, wp)))
        return cls(*(np.ascontiguousarray(a.ravel()) for a in arrs))

    def __len__(self) -> int:
        return self.q.size

    def take(self, sl) -> "_Batch":
        return _Batch(*(getattr(self, k)[sl] for k in ("q", "e", "w", "inc", "qp", "ep", "wp")))


def _f_grid(q, e, qp, ep, n):
    """Per-configuration true-anomaly grids of A, shape (B, n)."""
    Qp = qp * (1.0 + ep) / (1.0 - ep)
    R = CLIP_FACTOR * np.maximum(np.maximum(Qp, q), qp)
    p = q * (1.0 + e)
    with np.errstate(divide="ignore", invalid="ignore"):
        cosf = np.where(e > 0.0, (p / R - 1.0) / np.where(e > 0.0, e, 1.0), -2.0)
    clipped = cosf > -1.0
    fcap = np.arccos(np.clip(cosf, -1.0, 1.0))
    j = np.arange(n, dtype=float)
    periodic = -PI + TWO_PI * j / n
    closed = -1.0 + 2.0 * j / (n - 1)
    return np.where(clipped[:, None], fcap[:, None] * closed[None, :], periodic[None, :])


def _grid_d2(b: _Batch, n: int):
    f = _f_grid(b.q, b.e, b.qp, b.ep, n)
    g = np.broadcast_to(-PI + TWO_PI * np.arange(n, dtype=float) / n, (len(b), n))
    x, y, z = _positions((b.q * (1.0 + b.e))[:, None], b.e[:, None], b.w[:, None],
                         np.cos(b.inc)[:, None], np.sin(b.inc)[:, None], f)
    rp = (b.qp * (1.0 + b.ep))[:, None] / (1.0 + b.ep[:, None] * np.cos(g))
    v = g + b.wp[:, None]
    xp, yp = rp * np.cos(v), rp * np.sin(v)
    d2 = ((x[:, :, None] - xp[:, None, :]) ** 2 + (y[:, :, None] - yp[:, None, :]) ** 2
          + z[:, :, None] ** 2)
    return d2, f, g


def _grid_local_minima(d2: np.ndarray, m: int):
    """Indices (B, m) of the m smallest grid-local minima (periodic
    neighbourhood) of each (n, n) slab; missing minima are padded with the
    global grid minimum."""
    B, n, _ = d2.shape
    mask = np.ones(d2.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= d2 <= np.roll(d2, (di, dj), axis=(1, 2))
    masked = np.where(mask, d2, np.inf).reshape(B, n * n)
    m = min(m, n * n)
    idx = np.argpartition(masked, m - 1, axis=1)[:, :m]
    vals = np.take_along_axis(masked, idx, axis=1)
    best = np.argmin(d2.reshape(B, n * n), axis=1)
    idx = np.where(np.isfinite(vals), idx, best[:, None])
    return idx


def _params(b: _Batch):
    return (b.q * (1.0 + b.e), b.e, b.w, np.cos(b.inc), np.sin(b.inc),
            b.qp * (1.0 + b.ep), b.ep, b.wp)


def _value(P, f, g):
    p, e, w, cI, sI, pp, ep, wp = P
    den = 1.0 + e * np.cos(f)
    good = den > 0.0
    r = p / np.where(good, den, 1.0)
    rp = pp / (1.0 + ep * np.cos(g))
    u, v = f + w, g + wp
    su = np.sin(u)
    out = (r * np.cos(u) - rp * np.cos(v)) ** 2 + (r * su * cI - rp * np.sin(v)) ** 2 + (r * su * sI) ** 2
    return np.where(good, out, np.inf)


def _derivatives(P, f, g):
    """Gradient and Hessian of the squared distance in (f, f')."""
    p, e, w, cI, sI, pp, ep, wp = P
    cf, sf = np.cos(f), np.sin(f)
    den = 1.0 + e * cf
    r = p / den
    rf = r * e * sf / den
    rff = e / den * (2.0 * rf * sf + r * cf)
    u = f + w
    cu, su = np.cos(u), np.sin(u)
    U = (cu, su * cI, su * sI)
    Uf = (-su, cu * cI, cu * sI)
    X = [r * a for a in U]
    Xf = [rf * a + r * c for a, c in zip(U, Uf)]
    Xff = [(rff - r) * a + 2.0 * rf * c for a, c in zip(U, Uf)]

    cg, sg = np.cos(g), np.sin(g)
    dn = 1.0 + ep * cg
    rp = pp / dn
    rpf = rp * ep * sg / dn
    rpff = ep / dn * (2.0 * rpf * sg + rp * cg)
    v = g + wp
    cv, sv = np.cos(v), np.sin(v)
    Y = [rp * cv, rp * sv]
    Yf = [rpf * cv - rp * sv, rpf * sv + rp * cv]
    Yff = [(rpff - rp) * cv - 2.0 * rpf * sv, (rpff - rp) * sv + 2.0 * rpf * cv]

    D = [X[0] - Y[0], X[1] - Y[1], X[2]]
    g1 = 2.0 * (D[0] * Xf[0] + D[1] * Xf[1] + D[2] * Xf[2])
    g2 = -2.0 * (D[0] * Yf[0] + D[1] * Yf[1])
    h11 = 2.0 * (Xf[0] ** 2 + Xf[1] ** 2 + Xf[2] ** 2 + D[0] * Xff[0] + D[1] * Xff[1] + D[2] * Xff[2])
    h12 = -2.0 * (Xf[0] * Yf[0] + Xf[1] * Yf[1])
    h22 = 2.0 * (Yf[0] ** 2 + Yf[1] ** 2 - D[0] * Yff[0] - D[1] * Yff[1])
    return g1, g2, h11, h12, h22


def _sub(P, idx):
    return tuple(a[idx] for a in P)


def _newton(b: _Batch, f, g, max_iter: int = 60):
    """Damped Newton descent of the squared distance from (f, g).

    Returns (d2, f, g, evaluations).  Each candidate stops on its own when its
    gradient is negligible or no further decrease is possible.
    """
    P = _params(b)
    tol = 1e-12 * np.maximum(b.q, b.qp) ** 2
    f = np.array(f, dtype=float)
    g = np.array(g, dtype=float)
    val = _value(P, f, g)
    evals = f.size
    active = np.isfinite(val)
    for _ in range(max_iter):
        ia = np.flatnonzero(active)
        if ia.size == 0:
            break
        Pa = _sub(P, ia)
        fa, ga, va = f[ia], g[ia], val[ia]
        g1, g2, h11, h12, h22 = _derivatives(Pa, fa, ga)
        done = np.hypot(g1, g2) < tol[ia]
        det = h11 * h22 - h12 * h12
        pd = (h11 > 0.0) & (det > 0.0)
        safe_det = np.where(pd, det, 1.0)
        curv = np.maximum(np.abs(h11) + np.abs(h22), 1e-300)
        df = np.where(pd, -(h22 * g1 - h12 * g2) / safe_det, -g1 / curv)
        dg = np.where(pd, -(h11 * g2 - h12 * g1) / safe_det, -g2 / curv)
        size = np.hypot(df, dg)
        # a Newton step this short cannot lower d2 above rounding level
        done |= pd & (size < 1e-10)
        shrink = np.minimum(1.0, 0.5 / np.maximum(size, 1e-300))
        df, dg = df * shrink, dg * shrink

        t = np.ones(ia.size)
        accepted = np.zeros(ia.size, dtype=bool)
        for _h in range(50):
            jj = np.flatnonzero(~accepted & ~done & (t * size > 1e-13))
            if jj.size == 0:
                break
            cf = fa[jj] + t[jj] * df[jj]
            cg = ga[jj] + t[jj] * dg[jj]
            cv = _value(_sub(Pa, jj), cf, cg)
            evals += jj.size
            ok = cv < va[jj]
            k = jj[ok]
            fa[k], ga[k], va[k] = cf[ok], cg[ok], cv[ok]
            accepted[k] = True
            t[jj[~ok]] *= 0.5
        f[ia], g[ia], val[ia] = fa, ga, va
        active[ia[done | ~accepted]] = False
    return val, f, g, evals


def _dmin_batch(b: _Batch, n: int, m: int = 4):
    """Orbit distance of every configuration in the batch.

    Returns (d_min, f, f', evaluations) arrays; chunks are processed in index
    order with a fixed size so results do not depend on the caller's batching.
    """
    B = len(b)
    out_d = np.empty(B)
    out_f = np.empty(B)
    out_g = np.empty(B)
    evals = 0
    for s in range(0, B, CHUNK):
        sl = slice(s, min(B, s + CHUNK))
        sub = b.take(sl)
        nb = len(sub)
        d2, fgrid, ggrid = _grid_d2(sub, n)
        evals += d2.size
        idx = _grid_local_minima(d2, m)
        mm = idx.shape[1]
        rows = np.repeat(np.arange(nb), mm)
        flat = idx.ravel()
        f0 = fgrid[rows, flat // n]
        g0 = ggrid[rows, flat % n]
        rep = sub.take(rows)
        val, fr, gr, ne = _newton(rep, f0, g0)
        evals += ne
        val = val.reshape(nb, mm)
        best = np.argmin(val, axis=1)
        ar = np.arange(nb)
        out_d[sl] = np.sqrt(np.maximum(val[ar, best], 0.0))
        out_f[sl] = fr.reshape(nb, mm)[ar, best]
        out_g[sl] = gr.reshape(nb, mm)[ar, best]
    return out_d, out_f, out_g, evals


def orbit_distance_array(q, e, omega, inc, q_prime, e_prime, omega_prime, n: int = 40) -> np.ndarray:
    """Vectorised orbit distance over broadcastable element arrays
    (``inc = 0`` is accepted here)."""
    b = _Batch.make(q, e, omega, inc, q_prime, e_prime, omega_prime)
    shape = np.broadcast_shapes(*(np.shape(v) for v in (q, e, omega, inc, q_prime, e_prime, omega_prime)))
    return _dmin_batch(b, n)[0].reshape(shape)


def orbit_distance(c: MutualConfig, n: int = 120) -> DminResult:
    """Global minimum distance between the two trajectories of ``c``."""
    b = _Batch.make(c.q, c.e, c.omega, c.inc, c.q_prime, c.e_prime, c.omega_prime)
    d, f, g, evals = _dmin_batch(b, n, m=8)
    ff = float(f[0])
    ff = math.remainder(ff, TWO_PI) if c.e == 1.0 else reduce_angle(ff)
    return DminResult(float(d[0]), AnomalyPair(ff, reduce_angle(float(g[0]))), int(evals))


# -- extremisation over element domains ------------------------------------

@dataclass(frozen=True)
class DminBudget:
    """Search sizes for :func:`max_dmin_over_domain`."""

    outer_n: int = 24
    coarse_anomaly_n: int = 24
    anomaly_n: int = 40
    top_k: int = 8
    levels: int = 6
    max_iter: int = 80


@dataclass(frozen=True)
class DomainMax:
    value: float
    #: free elements at the maximum, in the plane's free-axis order
    argmax: tuple[float, float, float]
    evaluations: int


#: free elements per plane: (name, lower, upper, periodic)
FREE_AXES = {
    Plane.Q_OMEGA: (("e", 0.0, 1.0, False), ("inc", 0.0, HALF_PI, False), ("omega_prime", 0.0, TWO_PI, True)),
    Plane.Q_E: (("inc", 0.0, HALF_PI, False), ("omega", 0.0, HALF_PI, False), ("omega_prime", 0.0, TWO_PI, True)),
    Plane.Q_OMEGA_PRIME: (("e", 0.0, 1.0, False), ("inc", 0.0, HALF_PI, False), ("omega", 0.0, TWO_PI, True)),
}


def _elements(plane: Plane, point, q_prime, e_prime, t1, t2, t3) -> _Batch:
    x, y = point
    if plane is Plane.Q_OMEGA:
        return _Batch.make(x, t1, y, t2, q_prime, e_prime, t3)
    if plane is Plane.Q_E:
        return _Batch.make(x, y, t2, t1, q_prime, e_prime, t3)
    return _Batch.make(x, t1, t3, t2, q_prime, e_prime, y)


def _axis_values(lo, hi, periodic, n):
    if periodic:
        return lo + (hi - lo) * np.arange(n) / n
    return np.linspace(lo, hi, n)


def _coarse_surface(plane: Plane, point, q_prime, e_prime, budget: DminBudget) -> np.ndarray:
    """Grid estimate of d_min over the outer grid, shape (n, n, n).

    A's points depend only on A's free elements and A''s points only on
    omega', so all pair distances come from one Gram product per chunk.
    """
    n, nf = budget.outer_n, budget.coarse_anomaly_n
    axes = [_axis_values(lo, hi, per, n) for _, lo, hi, per in FREE_AXES[plane]]
    T = np.meshgrid(*axes, indexing="ij")
    x, y = point
    if plane is Plane.Q_OMEGA_PRIME:
        a_cfg = _elements(plane, point, q_prime, e_prime, T[0], T[1], T[2])
        b_wp = np.array([y])
    else:
        a_cfg = _elements(plane, point, q_prime, e_prime, T[0][:, :, 0], T[1][:, :, 0], T[2][:, :, 0])
        b_wp = axes[2]
    # points of A: (NA, nf, 3)
    fA = _f_grid(a_cfg.q, a_cfg.e, a_cfg.qp, a_cfg.ep, nf)
    XA = np.stack(_positions(a_cfg.q[:, None] * (1.0 + a_cfg.e[:, None]), a_cfg.e[:, None],
                             a_cfg.w[:, None], np.cos(a_cfg.inc)[:, None],
                             np.sin(a_cfg.inc)[:, None], fA), axis=-1)
    # points of A': (NB, nf, 3)
    g = -PI + TWO_PI * np.arange(nf) / nf
    rp = q_prime * (1.0 + e_prime) / (1.0 + e_prime * np.cos(g))
    v = g[None, :] + b_wp[:, None]
    XB = np.stack([rp * np.cos(v), rp * np.sin(v), np.zeros_like(v)], axis=-1)
    NA, NB = XA.shape[0], XB.shape[0]
    XAf = XA.reshape(-1, 3)
    XBf = XB.reshape(-1, 3)
    nA = np.einsum("ij,ij->i", XAf, XAf)
    nB = np.einsum("ij,ij->i", XBf, XBf)
    out = np.empty((NA, NB))
    step = max(1, (1 << 21) // (nf * NB * nf))
    for s in range(0, NA, step):
        blk = XAf[s * nf:(s + step) * nf]
        d2 = nA[s * nf:(s + step) * nf, None] + nB[None, :] - 2.0 * (blk @ XBf.T)
        k = blk.shape[0] // nf
        out[s:s + k] = d2.reshape(k, nf, NB, nf).min(axis=(1, 3))
    return np.sqrt(np.maximum(out, 0.0)).reshape(n, n, n)


def _top_local_maxima(S: np.ndarray, periodic, k: int):
    """Flat indices of up to k largest local maxima (26-neighbourhood)."""
    pad = [(0, 0) if per else (1, 1) for per in periodic]
    P = np.pad(S, pad, constant_values=-np.inf)
    is_max = np.ones(P.shape, dtype=bool)
    for d in np.ndindex(3, 3, 3):
        sh = tuple(x - 1 for x in d)
        if sh == (0, 0, 0):
            continue
        is_max &= P >= np.roll(P, sh, axis=(0, 1, 2))
    core = tuple(slice(0, None) if per else slice(1, -1) for per in periodic)
    is_max = is_max[core]
    order = np.argsort(-S, axis=None, kind="stable")
    maxima = [i for i in order if is_max.flat[i]][:k]
    for i in order:
        if len(maxima) >= k:
            break
        if i not in maxima:
            maxima.append(i)
    return maxima


def search_dmin_over_domain(plane: Plane | str, point, q_prime: float, e_prime: float,
                            budget: DminBudget | None = None) -> DomainMax:
    """Maximum of the orbit distance over the free elements of ``plane`` at
    the plane point ``point``: coarse 3D grid, then a lockstep compass search
    from the best grid-local maxima using the accurate orbit distance."""
    plane = Plane(plane)
    budget = budget or DminBudget()
    spec = FREE_AXES[plane]
    n = budget.outer_n
    periodic = [per for *_, per in spec]
    lo = np.array([s[1] for s in spec])
    hi = np.array([s[2] for s in spec])
    cell = np.array([(h - l) / (n if per else n - 1) for (_, l, h, per) in spec])
    axes = [_axis_values(l, h, per, n) for _, l, h, per in spec]

    S = _coarse_surface(plane, point, q_prime, e_prime, budget)
    starts = _top_local_maxima(S, periodic, budget.top_k)
    pos = np.array([[axes[a][i] for a, i in enumerate(np.unravel_index(s, S.shape))] for s in starts])

    def evaluate(X):
        b = _elements(plane, point, q_prime, e_prime, X[:, 0], X[:, 1], X[:, 2])
        d, _, _, ev = _dmin_batch(b, budget.anomaly_n)
        return d, ev

    def legal(X):
        X = X.copy()
        for a in range(3):
            if periodic[a]:
                X[:, a] = np.mod(X[:, a], hi[a])
            else:
                X[:, a] = np.clip(X[:, a], lo[a], hi[a])
        return X

    cur, evals = evaluate(pos)
    K = pos.shape[0]
    step = np.tile(cell, (K, 1))
    floor = cell / 2.0 ** budget.levels
    dirs = np.concatenate([np.eye(3), -np.eye(3)])
    for _ in range(budget.max_iter):
        active = np.flatnonzero(step[:, 0] >= floor[0])
        if active.size == 0:
            break
        cand = legal((pos[active, None, :] + dirs[None, :, :] * step[active, None, :]).reshape(-1, 3))
        val, ev = evaluate(cand)
        evals += ev
        val = val.reshape(active.size, 6)
        cand = cand.reshape(active.size, 6, 3)
        j = np.argmax(val, axis=1)
        best = val[np.arange(active.size), j]
        better = best > cur[active]
        mv = active[better]
        pos[mv] = cand[better, j[better]]
        cur[mv] = best[better]
        step[active[~better]] *= 0.5
    i = int(np.argmax(cur))
    return DomainMax(float(cur[i]), tuple(float(v) for v in pos[i]), int(evals))


def max_dmin_over_domain(plane: Plane | str, point, q_prime: float, e_prime: float,
                         budget: DminBudget | None = None) -> float:
    return search_dmin_over_domain(plane, point, q_prime, e_prime, budget).value


# -- brute-force nodal-distance oracle -------------------------------------

#: free rectangle of the nodal distance for each plane: (lo1, hi1, lo2, hi2)
NODAL_FREE = {
    Plane.Q_OMEGA: (0.0, 1.0, 0.0, PI),          # (e, omega')
    Plane.Q_E: (0.0, HALF_PI, 0.0, PI),          # (omega, omega')
    Plane.Q_OMEGA_PRIME: (0.0, 1.0, 0.0, PI),    # (e, omega)
}


def _nodal_on(plane: Plane, point, q_prime, e_prime, s, t):
    x, y = point
    if plane is Plane.Q_OMEGA:
        return delta_nod_array(x, s, y, q_prime, e_prime, t)
    if plane is Plane.Q_E:
        return delta_nod_array(x, y, s, q_prime, e_prime, t)
    return delta_nod_array(x, s, t, q_prime, e_prime, y)


def brute_max_min_delta_nod(plane: Plane | str, point, q_prime: float, e_prime: float,
                            grid_n: int = 400, top_k: int = 6, zoom_levels: int = 8) -> tuple[float, float]:
    """Min and max of the nodal distance over the plane's free rectangle by
    a closed grid, dense boundary sampling and local zoom refinement."""
    if grid_n < 50:
        raise ValueError("grid_n must be at least 50")
    plane = Plane(plane)
    lo1, hi1, lo2, hi2 = NODAL_FREE[plane]
    s = np.linspace(lo1, hi1, grid_n)
    t = np.linspace(lo2, hi2, grid_n)
    V = _nodal_on(plane, point, q_prime, e_prime, s[:, None], t[None, :])
    vmin, vmax = float(V.min()), float(V.max())

    # boundary edges at high density (extrema of the proofs sit on edges)
    m = 20 * grid_n
    se, te = np.linspace(lo1, hi1, m), np.linspace(lo2, hi2, m)
    for a, b in ((se, np.full(m, lo2)), (se, np.full(m, hi2)), (np.full(m, lo1), te), (np.full(m, hi1), te)):
        E = _nodal_on(plane, point, q_prime, e_prime, a, b)
        vmin, vmax = min(vmin, float(E.min())), max(vmax, float(E.max()))

    h1, h2 = s[1] - s[0], t[1] - t[0]
    flat = V.ravel()
    for sign in (1.0, -1.0):
        order = np.argsort(sign * flat, kind="stable")[:top_k]
        for idx in order:
            i, j = divmod(int(idx), grid_n)
            c1, c2, w1, w2 = s[i], t[j], 2.0 * h1, 2.0 * h2
            for _ in range(zoom_levels):
                a = np.clip(np.linspace(c1 - w1, c1 + w1, 21), lo1, hi1)
                b = np.clip(np.linspace(c2 - w2, c2 + w2, 21), lo2, hi2)
                Z = _nodal_on(plane, point, q_prime, e_prime, a[:, None], b[None, :])
                k = int(np.argmin(sign * Z))
                ki, kj = divmod(k, 21)
                c1, c2 = a[ki], b[kj]
                w1, w2 = w1 / 4.0, w2 / 4.0
                zk = float(Z.flat[k])
                if sign > 0:
                    vmin = min(vmin, zk)
                else:
                    vmax = max(vmax, zk)
    return vmin, vmax
