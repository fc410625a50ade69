"""Minimal SVG emitter for region maps, curves and scatter plots."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 60
PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666")


def _num(v: float) -> str:
    return f"{v:.2f}"


class Figure:
    """Linear axes on a fixed 800x600 canvas."""

    def __init__(self, xlim, ylim, xlabel: str = "", ylabel: str = "", title: str = ""):
        self.x0, self.x1 = map(float, xlim)
        self.y0, self.y1 = map(float, ylim)
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty axis range")
        self.xlabel, self.ylabel, self.title = xlabel, ylabel, title
        self.items: list[str] = []

    def px(self, x: float) -> float:
        return MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        return HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)

    def cells(self, xs, ys, colors) -> None:
        """Filled cells centred on the grid nodes; ``colors[i][j]`` is a fill
        string (or None to skip)."""
        xs, ys = list(xs), list(ys)

        def edges(v):
            if len(v) == 1:
                return [v[0] - 0.5, v[0] + 0.5]
            mids = [(a + b) / 2 for a, b in zip(v[:-1], v[1:])]
            return [v[0] - (mids[0] - v[0])] + mids + [v[-1] + (v[-1] - mids[-1])]

        ex, ey = edges(xs), edges(ys)
        for i in range(len(xs)):
            for j in range(len(ys)):
                c = colors[i][j]
                if c is None:
                    continue
                xa, xb = self.px(max(ex[i], self.x0)), self.px(min(ex[i + 1], self.x1))
                ya, yb = self.py(min(ey[j + 1], self.y1)), self.py(max(ey[j], self.y0))
                self.items.append(f'<rect x="{_num(xa)}" y="{_num(ya)}" width="{_num(xb - xa)}" '
                                  f'height="{_num(yb - ya)}" fill="{c}" stroke="none"/>')

    def polyline(self, points, color: str = "#000000", width: float = 1.5) -> None:
        pts = [(x, y) for x, y in points if math.isfinite(x) and math.isfinite(y)]
        if len(pts) < 2:
            return
        body = " ".join(f"{_num(self.px(x))},{_num(self.py(y))}" for x, y in pts)
        self.items.append(f'<polyline points="{body}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def points(self, pts, color: str = "#000000", radius: float = 2.0) -> None:
        for x, y in pts:
            if self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1:
                self.items.append(f'<circle cx="{_num(self.px(x))}" cy="{_num(self.py(y))}" r="{radius}" fill="{color}"/>')

    def legend(self, entries) -> None:
        for k, (label, color) in enumerate(entries):
            y = MARGIN_T + 14 * k
            self.items.append(f'<rect x="{WIDTH - 190}" y="{y}" width="10" height="10" fill="{color}"/>')
            self.items.append(f'<text x="{WIDTH - 175}" y="{y + 9}" font-size="10">{escape(label)}</text>')

    def _axes(self) -> list[str]:
        out = [f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH - MARGIN_L - MARGIN_R}" '
               f'height="{HEIGHT - MARGIN_T - MARGIN_B}" fill="none" stroke="#000000"/>']
        for k in range(6):
            xv = self.x0 + (self.x1 - self.x0) * k / 5
            yv = self.y0 + (self.y1 - self.y0) * k / 5
            out.append(f'<text x="{_num(self.px(xv))}" y="{HEIGHT - MARGIN_B + 16}" font-size="11" '
                       f'text-anchor="middle">{xv:.3g}</text>')
            out.append(f'<text x="{MARGIN_L - 6}" y="{_num(self.py(yv) + 4)}" font-size="11" '
                       f'text-anchor="end">{yv:.3g}</text>')
        out.append(f'<text x="{(WIDTH + MARGIN_L) / 2}" y="{HEIGHT - 20}" font-size="13" '
                   f'text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(f'<text x="18" y="{HEIGHT / 2}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(self.ylabel)}</text>')
        out.append(f'<text x="{WIDTH / 2}" y="24" font-size="14" text-anchor="middle">{escape(self.title)}</text>')
        return out

    def to_svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}">')
        clip = (f'<clipPath id="plot"><rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH - MARGIN_L - MARGIN_R}" '
                f'height="{HEIGHT - MARGIN_T - MARGIN_B}"/></clipPath>')
        body = [head, '<rect width="100%" height="100%" fill="#ffffff"/>', clip, '<g clip-path="url(#plot)">']
        body += self.items
        body.append("</g>")
        body += self._axes()
        body.append("</svg>")
        return "\n".join(body) + "\n"
