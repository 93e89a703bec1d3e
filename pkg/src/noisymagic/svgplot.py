"""Minimal self-contained SVG emission: line plots and heatmaps.

Plots are derived artifacts for eyeballing sweeps; all quantitative output
lives in the CSV files.  No external plotting dependency.
"""

from __future__ import annotations

import math
from pathlib import Path

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 55


def _ticks(lo: float, hi: float, n: int = 6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(x: float) -> str:
    if x == 0:
        return "0"
    if abs(x) >= 1000 or abs(x) < 0.01:
        return f"{x:.2e}"
    return f"{x:g}"


class _Canvas:
    def __init__(self, xlim, ylim, title, xlabel, ylabel):
        self.xlim, self.ylim = xlim, ylim
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="monospace" font-size="12">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH/2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
            f'<text x="{WIDTH/2}" y="{HEIGHT-12}" text-anchor="middle">{xlabel}</text>',
            f'<text x="16" y="{HEIGHT/2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {HEIGHT/2})">{ylabel}</text>',
        ]

    def px(self, x: float) -> float:
        lo, hi = self.xlim
        return MARGIN_L + (x - lo) / (hi - lo) * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        lo, hi = self.ylim
        return HEIGHT - MARGIN_B - (y - lo) / (hi - lo) * (HEIGHT - MARGIN_T - MARGIN_B)

    def axes(self):
        x0, x1 = MARGIN_L, WIDTH - MARGIN_R
        y0, y1 = MARGIN_T, HEIGHT - MARGIN_B
        self.parts.append(
            f'<rect x="{x0}" y="{y0}" width="{x1-x0}" height="{y1-y0}" '
            'fill="none" stroke="black"/>'
        )
        for t in _ticks(*self.xlim):
            if self.xlim[0] <= t <= self.xlim[1]:
                px = self.px(t)
                self.parts.append(f'<line x1="{px:.1f}" y1="{y1}" x2="{px:.1f}" y2="{y1+4}" stroke="black"/>')
                self.parts.append(f'<text x="{px:.1f}" y="{y1+18}" text-anchor="middle">{_fmt(t)}</text>')
        for t in _ticks(*self.ylim):
            if self.ylim[0] <= t <= self.ylim[1]:
                py = self.py(t)
                self.parts.append(f'<line x1="{x0-4}" y1="{py:.1f}" x2="{x0}" y2="{py:.1f}" stroke="black"/>')
                self.parts.append(f'<text x="{x0-7}" y="{py+4:.1f}" text-anchor="end">{_fmt(t)}</text>')

    def save(self, path):
        self.parts.append("</svg>")
        Path(path).write_text("\n".join(self.parts), encoding="utf-8")


def line_plot(path, series, title="", xlabel="", ylabel="", vlines=(), ylim=None):
    """Polyline plot.  series: list of dicts with keys x, y, label and
    optional yerr (error bars) and marker_only.  vlines: x positions drawn
    as dashed verticals.
    """
    xs = [float(v) for s in series for v in s["x"]]
    ys = [float(v) for s in series for v in s["y"] if math.isfinite(v)]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    xlim = (min(xs), max(xs)) if min(xs) < max(xs) else (min(xs) - 1, max(xs) + 1)
    if ylim is None:
        pad = 0.05 * (max(ys) - min(ys) or 1.0)
        ylim = (min(ys) - pad, max(ys) + pad)
    cv = _Canvas(xlim, ylim, title, xlabel, ylabel)
    cv.axes()
    for x in vlines:
        px = cv.px(float(x))
        cv.parts.append(
            f'<line x1="{px:.1f}" y1="{MARGIN_T}" x2="{px:.1f}" y2="{HEIGHT-MARGIN_B}" '
            'stroke="gray" stroke-dasharray="5,4"/>'
        )
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = [
            (cv.px(float(x)), cv.py(float(y)))
            for x, y in zip(s["x"], s["y"])
            if math.isfinite(float(y))
        ]
        if not s.get("marker_only"):
            poly = " ".join(f"{px:.1f},{py:.1f}" for px, py in pts)
            cv.parts.append(f'<polyline points="{poly}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for px, py in pts:
            cv.parts.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="2.5" fill="{color}"/>')
        if s.get("yerr") is not None:
            for x, y, e in zip(s["x"], s["y"], s["yerr"]):
                if not math.isfinite(float(y)):
                    continue
                px, y0, y1 = cv.px(float(x)), cv.py(float(y) - float(e)), cv.py(float(y) + float(e))
                cv.parts.append(f'<line x1="{px:.1f}" y1="{y0:.1f}" x2="{px:.1f}" y2="{y1:.1f}" stroke="{color}"/>')
        cv.parts.append(
            f'<text x="{WIDTH-MARGIN_R-8}" y="{MARGIN_T+16+14*i}" text-anchor="end" '
            f'fill="{color}">{s.get("label", f"series {i}")}</text>'
        )
    cv.save(path)


def _viridis(u: float) -> str:
    stops = (
        (0.267, 0.005, 0.329),
        (0.283, 0.141, 0.458),
        (0.254, 0.265, 0.530),
        (0.207, 0.372, 0.553),
        (0.164, 0.471, 0.558),
        (0.128, 0.567, 0.551),
        (0.135, 0.659, 0.518),
        (0.267, 0.749, 0.441),
        (0.478, 0.821, 0.318),
        (0.741, 0.873, 0.150),
        (0.993, 0.906, 0.144),
    )
    u = min(max(u, 0.0), 1.0) * (len(stops) - 1)
    i = min(int(u), len(stops) - 2)
    f = u - i
    rgb = [stops[i][c] * (1 - f) + stops[i + 1][c] * f for c in range(3)]
    return "#%02x%02x%02x" % tuple(int(round(255 * v)) for v in rgb)


def heatmap(path, x_vals, y_vals, z, title="", xlabel="", ylabel="", boundary=None):
    """Grid heatmap; z[j][i] is the value at (x_vals[i], y_vals[j]).

    boundary, when given, is a list of (x, y) points drawn as a white curve
    on top of the cells.
    """
    x_vals, y_vals = list(x_vals), list(y_vals)
    zmin = min(min(row) for row in z)
    zmax = max(max(row) for row in z)
    span = (zmax - zmin) or 1.0
    dx = (x_vals[-1] - x_vals[0]) / max(len(x_vals) - 1, 1) or 1.0
    dy = (y_vals[-1] - y_vals[0]) / max(len(y_vals) - 1, 1) or 1.0
    cv = _Canvas(
        (x_vals[0] - dx / 2, x_vals[-1] + dx / 2),
        (y_vals[0] - dy / 2, y_vals[-1] + dy / 2),
        title, xlabel, ylabel,
    )
    for j, y in enumerate(y_vals):
        for i, x in enumerate(x_vals):
            color = _viridis((z[j][i] - zmin) / span)
            x0, y0 = cv.px(x - dx / 2), cv.py(y + dy / 2)
            w, h = cv.px(x + dx / 2) - x0, cv.py(y - dy / 2) - y0
            cv.parts.append(
                f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{w:.1f}" height="{h:.1f}" fill="{color}"/>'
            )
    if boundary:
        pts = " ".join(f"{cv.px(float(x)):.1f},{cv.py(float(y)):.1f}" for x, y in boundary)
        cv.parts.append(f'<polyline points="{pts}" fill="none" stroke="white" stroke-width="2"/>')
    cv.axes()
    cv.parts.append(
        f'<text x="{WIDTH-MARGIN_R-8}" y="{MARGIN_T+16}" text-anchor="end" fill="black">'
        f"range [{_fmt(zmin)}, {_fmt(zmax)}]</text>"
    )
    cv.save(path)
