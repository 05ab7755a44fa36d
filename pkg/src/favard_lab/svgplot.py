"""Self-contained log-log SVG plots of decay tables with reference overlays."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from .estimators import reference_bounds

WIDTH, HEIGHT = 640, 440
MARGIN = (70, 20, 30, 50)  # left, right, top, bottom

REFERENCE_SHAPES = {
    "n^(-1/6)": lambda n: reference_bounds(n).npv_upper,
    "n^(-1) log n": lambda n: reference_bounds(n).bv_lower,
    "n^(-1)": lambda n: reference_bounds(n).cdt_lower,
}
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _ticks(lo: float, hi: float) -> list[float]:
    """Powers of ten inside [lo, hi], or the two ends when there are fewer than two."""
    out = [10.0 ** k for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
           if lo <= 10.0 ** k <= hi]
    return out if len(out) >= 2 else [lo, hi]


def loglog_svg(series: dict[str, Sequence[tuple[float, float]]], title: str = "",
               xlabel: str = "n", ylabel: str = "value", references: bool = True) -> str:
    """Render named (x, y) series on log-log axes.

    With ``references`` every shape in ``REFERENCE_SHAPES`` is drawn dashed,
    scaled to agree with the first series at its first point with x >= 2.
    """
    series = {k: [(float(x), float(y)) for x, y in v if x > 0 and y > 0] for k, v in series.items()}
    series = {k: v for k, v in series.items() if v}
    if not series:
        raise ValueError("nothing to plot: need points with positive coordinates")
    lines = dict(series)
    dashed = set()
    if references:
        base = next(iter(series.values()))
        anchor = next(((x, y) for x, y in base if x >= 2), None)
        if anchor is not None:
            xs = sorted({x for v in series.values() for x, _ in v if x >= 2})
            for name, f in REFERENCE_SHAPES.items():
                c = anchor[1] / f(anchor[0])
                lines[name] = [(x, c * f(x)) for x in xs]
                dashed.add(name)
    all_x = [x for v in lines.values() for x, _ in v]
    all_y = [y for v in lines.values() for _, y in v]
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = min(all_y), max(all_y)
    if x0 == x1:
        x0, x1 = x0 / 2, x1 * 2
    if y0 == y1:
        y0, y1 = y0 / 2, y1 * 2
    lx0, lx1, ly0, ly1 = math.log10(x0), math.log10(x1), math.log10(y0), math.log10(y1)
    pad = 0.05 * (ly1 - ly0)
    ly0, ly1 = ly0 - pad, ly1 + pad
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def px(x):
        return left + (math.log10(x) - lx0) / (lx1 - lx0) * pw

    def py(y):
        return top + (ly1 - math.log10(y)) / (ly1 - ly0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{top - 10}" text-anchor="middle">{escape(title)}</text>')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_fmt(px(t))}" y1="{top + ph}" x2="{_fmt(px(t))}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px(t))}" y="{top + ph + 18}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(10 ** ly0, 10 ** ly1):
        out.append(f'<line x1="{left - 5}" y1="{_fmt(py(t))}" x2="{left}" y2="{_fmt(py(t))}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{_fmt(py(t) + 4)}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 15 {top + ph / 2})">{escape(ylabel)}</text>')
    for k, (name, pts) in enumerate(lines.items()):
        color = _COLORS[k % len(_COLORS)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        style = ' stroke-dasharray="6,4"' if name in dashed else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{style} points="{coords}"/>')
        if name not in dashed:
            for x, y in pts:
                out.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" fill="{color}"/>')
        ly = top + 14 + 14 * k
        out.append(f'<line x1="{left + pw - 150}" y1="{ly - 4}" x2="{left + pw - 125}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="1.5"{style}/>')
        out.append(f'<text x="{left + pw - 120}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
