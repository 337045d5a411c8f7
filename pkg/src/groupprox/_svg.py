"""Minimal native SVG writers for line plots and region maps.

Plots are a convenience layered over the CSV outputs, so this stays a
dependency-free polyline renderer: axes, ticks, legend, nothing else.
"""

from __future__ import annotations

import math

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 36, 52


def _nice_ticks(lo: float, hi: float, target: int = 5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.6g}"


class _Svg:
    def __init__(self, width=_W, height=_H):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, color="#000", width=1.0):
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def polyline(self, pts, color, width=1.6):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>'
        )

    def polygon(self, pts, fill, opacity=1.0):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" stroke="none"/>'
        )

    def text(self, x, y, s, size=12, anchor="middle", color="#000", rotate=None):
        tr = f' transform="rotate(-90 {x:.1f} {y:.1f})"' if rotate else ""
        self.parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}" fill="{color}"{tr}>{s}</text>'
        )

    def save(self, path):
        self.parts.append("</svg>")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.parts))


def _frame(svg: _Svg, title, xlabel, ylabel):
    svg.line(_ML, _H - _MB, _W - _MR, _H - _MB)
    svg.line(_ML, _MT, _ML, _H - _MB)
    if title:
        svg.text(_W / 2, _MT - 14, title, size=14)
    if xlabel:
        svg.text((_ML + _W - _MR) / 2, _H - 14, xlabel)
    if ylabel:
        svg.text(18, (_MT + _H - _MB) / 2, ylabel, rotate=True)


def line_plot(series, path, *, title="", xlabel="", ylabel="", logy=False):
    """Render ``series = [(label, xs, ys), ...]`` as one SVG line chart."""
    pts_all = [
        (x, y)
        for _, xs, ys in series
        for x, y in zip(xs, ys)
        if not logy or y > 0
    ]
    if not pts_all:
        raise ValueError("nothing to plot")
    xs_all = [p[0] for p in pts_all]
    ys_all = [math.log10(p[1]) if logy else p[1] for p in pts_all]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    svg = _Svg()
    if logy:
        for d in range(math.floor(y_lo), math.ceil(y_hi) + 1):
            if y_lo <= d <= y_hi:
                svg.line(_ML - 4, py(d), _ML, py(d))
                svg.text(_ML - 8, py(d) + 4, f"1e{d}", anchor="end", size=11)
    else:
        for t in _nice_ticks(y_lo, y_hi):
            svg.line(_ML - 4, py(t), _ML, py(t))
            svg.text(_ML - 8, py(t) + 4, _fmt(t), anchor="end", size=11)
    for t in _nice_ticks(x_lo, x_hi):
        svg.line(px(t), _H - _MB, px(t), _H - _MB + 4)
        svg.text(px(t), _H - _MB + 18, _fmt(t), size=11)
    _frame(svg, title, xlabel, ylabel)

    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = [
            (px(x), py(math.log10(y) if logy else y))
            for x, y in zip(xs, ys)
            if not logy or y > 0
        ]
        if pts:
            svg.polyline(pts, color)
        ly = _MT + 16 + 16 * i
        svg.line(_W - _MR - 130, ly - 4, _W - _MR - 104, ly - 4, color=color, width=2)
        svg.text(_W - _MR - 98, ly, label, anchor="start", size=11)
    svg.save(path)


def region_plot(axis, grid, path, *, title=""):
    """Render the zero-classified region of a scan as a filled area."""
    n = len(axis)
    lo, hi = float(axis[0]), float(axis[-1])
    span = hi - lo if hi > lo else 1.0

    def px(x):
        return _ML + (x - lo) / span * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - lo) / span * (_H - _MT - _MB)

    svg = _Svg()
    boundary = []
    for i in range(n):
        col = grid[i]
        top = -1
        for j in range(n - 1, -1, -1):
            if col[j]:
                top = j
                break
        boundary.append(float(axis[top]) if top >= 0 else None)
    poly = [(px(lo), py(lo))]
    for i in range(n):
        if boundary[i] is None:
            break
        poly.append((px(float(axis[i])), py(boundary[i])))
    poly.append((poly[-1][0], py(lo)))
    svg.polygon(poly, fill="#1f77b4", opacity=0.55)
    for t in _nice_ticks(lo, hi):
        svg.line(px(t), _H - _MB, px(t), _H - _MB + 4)
        svg.text(px(t), _H - _MB + 18, _fmt(t), size=11)
        svg.line(_ML - 4, py(t), _ML, py(t))
        svg.text(_ML - 8, py(t) + 4, _fmt(t), anchor="end", size=11)
    _frame(svg, title, "y1", "y2")
    svg.save(path)
