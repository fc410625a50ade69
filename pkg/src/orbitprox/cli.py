"""Command-line front end: ``orbitprox bounds|curves|regions|dmin|oracle|catalog``.

Exit codes: 0 success, 2 invalid flags, 3 unreadable input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import Plane, beta_curve_q, bounds, gamma_curve_q
from .catalog import (DEFAULT_BAND, DEFAULT_H_THRESHOLD, analyze_entry, catalog_summary,
                      entry_omega, parse_catalog)
from .dmin import DminBudget, brute_max_min_delta_nod, max_dmin_over_domain, orbit_distance
from .elements import HALF_PI, PI, TWO_PI, CometaryElements, MutualConfig, reduce_angle
from .errors import EmptyCurve, MalformedHeader
from .regions import PIECES, RegionLabel, region_grid, trace_zero_curve
from .surfaces import AXIS_NAMES, Surface, curve_to_csv, fmt
from .svg import PALETTE, Figure

EXIT_BAD_FLAGS = 2  # argparse exits with this code on flag errors
EXIT_BAD_INPUT = 3

#: default second-axis range per plane
Y_RANGE = {Plane.Q_OMEGA: (0.0, HALF_PI), Plane.Q_E: (0.0, 1.0), Plane.Q_OMEGA_PRIME: (0.0, HALF_PI)}
PLANE_TAG = {"omega": Plane.Q_OMEGA, "e": Plane.Q_E, "omegap": Plane.Q_OMEGA_PRIME}
CURVE_IDS = ("beta", "gamma") + tuple(
    f"{piece[0]}-{tag}-{piece[2:]}" for tag in PLANE_TAG for piece in PIECES)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ORBITPROX_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_rows(fn, n_rows: int) -> list:
    """Evaluate ``fn(i)`` for every row; results are assembled in row order."""
    workers = min(_threads(), n_rows)
    if workers <= 1:
        return [fn(i) for i in range(n_rows)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_rows)))


# -- argument helpers ------------------------------------------------------

def _add_orbit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--qprime", type=float, default=1.0, help="pericenter distance q' of A' [au] (default 1)")
    p.add_argument("--eprime", type=float, default=0.0, help="eccentricity e' of A' [dimensionless, 0 <= e' < 1] (default 0)")


def _add_window_flags(p: argparse.ArgumentParser, n_default: int) -> None:
    p.add_argument("--plane", choices=[pl.value for pl in Plane], default="q-omega",
                   help="coordinate plane (default q-omega)")
    p.add_argument("--qmin", type=float, default=None, help="lower q of the window [au] (default qmax/n)")
    p.add_argument("--qmax", type=float, default=2.0, help="upper q of the window [au] (default 2)")
    p.add_argument("--ymin", type=float, default=None,
                   help="lower second coordinate [rad for omega/omega', dimensionless for e] (default domain minimum)")
    p.add_argument("--ymax", type=float, default=None,
                   help="upper second coordinate [rad for omega/omega', dimensionless for e] (default domain maximum)")
    p.add_argument("--n", type=int, default=n_default, help=f"grid nodes per axis (default {n_default})")
    p.add_argument("--nq", type=int, default=None, help="grid nodes along q (overrides --n)")
    p.add_argument("--ny", type=int, default=None, help="grid nodes along the second axis (overrides --n)")


def _check_orbit(parser, args) -> None:
    if not args.qprime > 0.0:
        parser.error("--qprime must be positive")
    if not 0.0 <= args.eprime < 1.0:
        parser.error("--eprime must lie in [0, 1)")


def _window(parser, args):
    plane = Plane(args.plane)
    nq = args.nq if args.nq is not None else args.n
    ny = args.ny if args.ny is not None else args.n
    if nq < 2 or ny < 2:
        parser.error("the grid needs at least 2 nodes along each axis")
    lo, hi = Y_RANGE[plane]
    y0 = lo if args.ymin is None else args.ymin
    y1 = hi if args.ymax is None else args.ymax
    qmax = args.qmax
    qmin = qmax / nq if args.qmin is None else args.qmin
    if not (0.0 < qmin < qmax):
        parser.error("the q window must satisfy 0 < qmin < qmax")
    if not (lo <= y0 < y1 <= hi + 1e-12):
        parser.error(f"the second-axis window must lie inside [{lo}, {hi}] with ymin < ymax")
    return plane, np.linspace(qmin, qmax, nq), np.linspace(y0, min(y1, hi), ny)


# -- subcommands -----------------------------------------------------------

def cmd_bounds(parser, args) -> int:
    _check_orbit(parser, args)
    plane, xs, ys = _window(parser, args)

    def row(i):
        return [getattr(bounds(plane, float(xs[i]), float(y), args.qprime, args.eprime), args.what) for y in ys]

    surf = Surface(plane, xs, ys, np.array(_ordered_rows(row, xs.size)),
                   {"q_prime": args.qprime, "e_prime": args.eprime, "what": args.what})
    if args.out:
        surf.write(args.out)
    else:
        sys.stdout.write(surf.to_csv())
    return 0


def _curve_points(parser, which: str, q_prime: float, e_prime: float, n: int, qmax: float):
    ws = np.linspace(0.0, HALF_PI, n)
    if which == "beta":
        return [[(beta_curve_q(float(w), q_prime), float(w)) for w in ws]], ("q", "omega")
    if which == "gamma":
        return [[(gamma_curve_q(float(w), q_prime), float(w)) for w in ws]], ("q", "omega")
    kind, tag, part = which.split("-")
    plane = PLANE_TAG[tag]
    lo, hi = Y_RANGE[plane]
    window = (qmax / n, qmax, lo, hi)
    try:
        curves = trace_zero_curve(plane, f"{kind}_{part}", q_prime, e_prime, window, n)
    except EmptyCurve:
        return [], AXIS_NAMES[plane]
    return [list(c.points) for c in curves], AXIS_NAMES[plane]


def cmd_curves(parser, args) -> int:
    _check_orbit(parser, args)
    wanted = list(CURVE_IDS) if "all" in args.which else args.which
    for w in wanted:
        if w not in CURVE_IDS:
            parser.error(f"unknown curve id {w!r}; choose from {', '.join(CURVE_IDS)} or all")
    if args.n < 2:
        parser.error("--n must be at least 2")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for w in wanted:
        comps, names = _curve_points(parser, w, args.qprime, args.eprime, args.n, args.qmax)
        for k, pts in enumerate(comps):
            text = curve_to_csv(pts, names)
            name = w if len(comps) == 1 else f"{w}_{k}"
            if out_dir:
                (out_dir / f"{name}.csv").write_text(text)
            else:
                sys.stdout.write(f"# {name}\n{text}")
    return 0


def _region_colors(codes: np.ndarray):
    distinct = sorted(set(int(c) for c in codes.ravel()))
    cmap = {c: PALETTE[k % len(PALETTE)] for k, c in enumerate(distinct)}
    return cmap, [[cmap[int(c)] for c in row] for row in codes]


def _label_text(code: int) -> str:
    lab = RegionLabel.from_code(code)
    names = [n for n, on in (("only int", lab.only_internal), ("only ext", lab.only_external),
                             ("int", lab.internal_possible), ("ext", lab.external_possible),
                             ("linked", lab.linked_possible), ("crossing", lab.crossing_possible)) if on]
    return f"{code}: " + (", ".join(names) or "none")


def cmd_regions(parser, args) -> int:
    _check_orbit(parser, args)
    plane, xs, ys = _window(parser, args)
    codes = np.vstack(_ordered_rows(lambda i: region_grid(plane, xs[i:i + 1], ys, args.qprime, args.eprime),
                                    xs.size))
    surf = Surface(plane, xs, ys, codes.astype(float),
                   {"q_prime": args.qprime, "e_prime": args.eprime, "what": "region_code"})
    as_int = lambda v: str(int(v))  # noqa: E731
    if args.out:
        surf.write(args.out, as_int)
    else:
        sys.stdout.write(surf.to_csv(as_int))
    if args.svg:
        a1, a2 = AXIS_NAMES[plane]
        fig = Figure((xs[0], xs[-1]), (ys[0], ys[-1]), a1, a2,
                     f"linking regions, q'={args.qprime:g}, e'={args.eprime:g}")
        cmap, colors = _region_colors(codes)
        fig.cells(xs, ys, colors)
        window = (float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1]))
        for piece in PIECES:
            try:
                for cv in trace_zero_curve(plane, piece, args.qprime, args.eprime, window, max(xs.size, ys.size)):
                    fig.polyline(cv.points, "#000000", 1.2)
            except EmptyCurve:
                pass
        fig.legend([(_label_text(c), col) for c, col in cmap.items()])
        Path(args.svg).write_text(fig.to_svg())
    return 0


def _budget(args) -> DminBudget:
    return DminBudget(outer_n=args.outer_n, anomaly_n=args.anomaly_n, top_k=args.top_k)


def cmd_dmin(parser, args) -> int:
    _check_orbit(parser, args)
    if args.mode == "point":
        if not args.q > 0.0 or not 0.0 <= args.e <= 1.0 or not 0.0 < args.inc < PI:
            parser.error("need q > 0, 0 <= e <= 1 and 0 < inc < pi")
        res = orbit_distance(MutualConfig(args.q, args.e, args.qprime, args.eprime,
                                          args.omega, args.omegap, args.inc), n=args.anomaly_n)
        print(json.dumps({"d_min": res.d_min, "f": res.argmin.f, "f_prime": res.argmin.f_prime}))
        return 0
    plane, xs, ys = _window(parser, args)
    budget = _budget(args)

    def row(i):
        return [max_dmin_over_domain(plane, (float(xs[i]), float(y)), args.qprime, args.eprime, budget) for y in ys]

    vals = np.array(_ordered_rows(row, xs.size))
    upper = np.array([[bounds(plane, float(x), float(y), args.qprime, args.eprime).upper for y in ys] for x in xs])
    violations = int(np.sum(vals > upper + 1e-6))
    surf = Surface(plane, xs, ys, vals, {"q_prime": args.qprime, "e_prime": args.eprime, "what": "dmin_max",
                                         "violations": violations,
                                         "budget": {"outer_n": budget.outer_n, "anomaly_n": budget.anomaly_n,
                                                    "top_k": budget.top_k}})
    if args.out:
        surf.write(args.out)
    else:
        sys.stdout.write(surf.to_csv())
    if violations:
        print(f"warning: {violations} cells with max d_min above max delta_nod", file=sys.stderr)
    return 0


def cmd_oracle(parser, args) -> int:
    _check_orbit(parser, args)
    plane = Plane(args.plane)
    if args.grid_n < 50:
        parser.error("--grid-n must be at least 50")
    if not args.x > 0.0:
        parser.error("--x (q) must be positive")
    rep = bounds(plane, args.x, args.y, args.qprime, args.eprime)
    bmin, bmax = brute_max_min_delta_nod(plane, (args.x, args.y), args.qprime, args.eprime, args.grid_n)
    print(json.dumps({
        "plane": plane.value, "point": [args.x, args.y],
        "closed_form": {"lower": rep.lower, "upper": rep.upper},
        "brute": {"min": bmin, "max": bmax},
        "difference": {"lower": rep.lower - bmin, "upper": rep.upper - bmax},
    }, indent=2))
    return 0


def _parse_reference(parser, text: str | None) -> CometaryElements | None:
    if text is None:
        return None
    try:
        q, e, i, node, argperi = (float(v) for v in text.split(","))
        return CometaryElements(q, e, math.radians(i), math.radians(node), math.radians(argperi))
    except ValueError as exc:
        parser.error(f"--reference must be 'q,e,i_deg,node_deg,argperi_deg': {exc}")


def cmd_catalog(parser, args) -> int:
    _check_orbit(parser, args)
    if not args.band > 0.0:
        parser.error("--band must be positive")
    reference = _parse_reference(parser, args.reference)
    try:
        with open(args.input, newline="", encoding="utf-8") as fh:
            entries, rejects = parse_catalog(fh)
    except (OSError, UnicodeDecodeError, MalformedHeader) as exc:
        print(f"error: cannot read catalog {args.input}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = ["designation,q_au,omega_raw_rad,omega_folded_rad,beta_offset_au,faint,region_code"]
    faint_pts, bright_pts = [], []
    for en in entries:
        d = analyze_entry(en, args.qprime, args.eprime, args.h_threshold, reference)
        raw = reduce_angle(entry_omega(en, reference))
        rows.append(",".join([en.designation, fmt(en.q), fmt(raw), fmt(d.omega_folded), fmt(d.beta_offset),
                              str(int(d.faint)), str(d.region.code)]))
        (faint_pts if d.faint else bright_pts).append((raw, en.q))
    (out_dir / "diagnostics.csv").write_text("\n".join(rows) + "\n")
    (out_dir / "rejects.txt").write_text("".join(f"{r.line}: {r.reason}: {r.text}\n" for r in rejects))

    s = catalog_summary(entries, args.qprime, args.eprime, args.h_threshold, args.band, reference)
    summary = {"entries": len(entries), "rejects": len(rejects), "faint_total": s.faint_total,
               "in_only_internal": s.in_only_internal, "within_band_of_beta": s.within_band_of_beta,
               "h_threshold": args.h_threshold, "band_width": args.band,
               "q_prime": args.qprime, "e_prime": args.eprime, "version": __version__}
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    qtop = max([args.qmax] + [p[1] for p in faint_pts + bright_pts])
    fig = Figure((0.0, TWO_PI), (0.0, qtop), "omega [rad]", "q [au]", "catalog (gray: faint)")
    fig.points(faint_pts, "#999999", 1.8)
    fig.points(bright_pts, "#000000", 1.8)
    ws = np.linspace(0.0, TWO_PI, 721)
    fig.polyline([(float(w), args.qprime * (1.0 - math.cos(w)) / 2.0) for w in ws], PALETTE[0], 1.8)
    fig.polyline([(float(w), beta_curve_q(float(w), args.qprime)) for w in ws], PALETTE[1], 1.8)
    fig.legend([("l_int = 0", PALETTE[0]), ("beta", PALETTE[1])])
    (out_dir / "scatter.svg").write_text(fig.to_svg())
    print(json.dumps(summary, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitprox", description=__doc__.splitlines()[0],
                                     allow_abbrev=False)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="closed-form min/max nodal-distance surface", allow_abbrev=False)
    _add_window_flags(p, 200)
    _add_orbit_flags(p)
    p.add_argument("--what", choices=["lower", "upper"], default="upper", help="which bound to tabulate [au]")
    p.add_argument("--out", help="CSV output path (a .json sidecar is written next to it); stdout if omitted")
    p.set_defaults(func=cmd_bounds, subparser=p)

    p = sub.add_parser("curves", help="beta/gamma curves and zero-level curves of the bound pieces",
                       allow_abbrev=False)
    p.add_argument("--which", nargs="+", default=["beta"], help=f"curve ids ({', '.join(CURVE_IDS)}) or all")
    _add_orbit_flags(p)
    p.add_argument("--qmax", type=float, default=2.0, help="upper q of the tracing window [au] (default 2)")
    p.add_argument("--n", type=int, default=200, help="samples / tracing grid nodes per axis (default 200)")
    p.add_argument("--out-dir", help="directory for one CSV per curve; stdout if omitted")
    p.set_defaults(func=cmd_curves, subparser=p)

    p = sub.add_parser("regions", help="linking-configuration region map", allow_abbrev=False)
    _add_window_flags(p, 200)
    _add_orbit_flags(p)
    p.add_argument("--out", help="CSV of region codes; stdout if omitted")
    p.add_argument("--svg", help="SVG map output path")
    p.set_defaults(func=cmd_regions, subparser=p)

    p = sub.add_parser("dmin", help="orbit distance at a point, or max orbit distance surface", allow_abbrev=False)
    p.add_argument("mode", choices=["point", "surface"], help="point: one configuration; surface: plane sweep")
    _add_window_flags(p, 40)
    _add_orbit_flags(p)
    p.add_argument("--q", type=float, default=1.0, help="point mode: pericenter distance q of A [au]")
    p.add_argument("--e", type=float, default=0.0, help="point mode: eccentricity e of A [dimensionless]")
    p.add_argument("--omega", type=float, default=0.0, help="point mode: mutual argument of pericenter of A [rad]")
    p.add_argument("--omegap", type=float, default=0.0, help="point mode: mutual argument of pericenter of A' [rad]")
    p.add_argument("--inc", type=float, default=HALF_PI, help="point mode: mutual inclination [rad] (default pi/2)")
    p.add_argument("--outer-n", type=int, default=DminBudget.outer_n,
                   help=f"surface mode: coarse grid per free element (default {DminBudget.outer_n})")
    p.add_argument("--anomaly-n", type=int, default=None,
                   help="anomaly grid per axis (default 120 in point mode, 40 in surface mode)")
    p.add_argument("--top-k", type=int, default=DminBudget.top_k,
                   help=f"surface mode: refined starts per cell (default {DminBudget.top_k})")
    p.add_argument("--out", help="surface mode: CSV output path; stdout if omitted")
    p.set_defaults(func=cmd_dmin, subparser=p)

    p = sub.add_parser("oracle", help="closed-form bounds against brute-force nodal-distance extrema",
                       allow_abbrev=False)
    p.add_argument("--plane", choices=[pl.value for pl in Plane], default="q-omega", help="coordinate plane")
    p.add_argument("--x", type=float, required=True, help="q coordinate [au]")
    p.add_argument("--y", type=float, required=True, help="second coordinate [rad or dimensionless]")
    _add_orbit_flags(p)
    p.add_argument("--grid-n", type=int, default=400, help="brute-force grid nodes per axis (default 400)")
    p.set_defaults(func=cmd_oracle, subparser=p)

    p = sub.add_parser("catalog", help="(q, omega) analysis of an asteroid catalog CSV", allow_abbrev=False)
    p.add_argument("--input", required=True,
                   help="catalog CSV with header designation,q_au,e,i_deg,node_deg,argperi_deg,H")
    _add_orbit_flags(p)
    p.add_argument("--h-threshold", type=float, default=DEFAULT_H_THRESHOLD,
                   help="absolute magnitude above which an entry is faint [mag] (default 22)")
    p.add_argument("--band", type=float, default=DEFAULT_BAND,
                   help="half-width in q of the band around beta [au] (default 0.05)")
    p.add_argument("--reference",
                   help="use mutual omega against this orbit 'q_au,e,i_deg,node_deg,argperi_deg' "
                        "instead of the raw argument of perihelion")
    p.add_argument("--qmax", type=float, default=2.0, help="minimum upper q of the scatter plot [au]")
    p.add_argument("--out-dir", default=".", help="directory for diagnostics.csv, rejects.txt, summary.json, scatter.svg")
    p.set_defaults(func=cmd_catalog, subparser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "anomaly_n", "absent") is None:
        args.anomaly_n = 120 if args.mode == "point" else DminBudget.anomaly_n
    return args.func(args.subparser, args)


if __name__ == "__main__":
    sys.exit(main())
