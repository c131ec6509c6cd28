"""Minimal SVG 1.1 line/scatter plots (no plotting library required)."""

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=80, right=20, top=40, bottom=60)
COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")


def _ticks(lo, hi, count=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def plot(series, title="", xlabel="", ylabel="", logx=False, logy=False):
    """Render ``series`` (list of (label, xs, ys, style)) to an SVG string.

    ``style`` is ``"line"`` or ``"points"``.  Non-finite points, and
    non-positive ones on log axes, are skipped.
    """
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    cleaned = []
    for label, xs, ys, style in series:
        pts = [(tx(x), ty(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y)
               and (not logx or x > 0) and (not logy or y > 0)]
        cleaned.append((label, pts, style))
    allx = [p[0] for _, pts, _ in cleaned for p in pts] or [0.0, 1.0]
    ally = [p[1] for _, pts, _ in cleaned for p in pts] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="13">'
        f'{escape(xlabel + (" (log10)" if logx else ""))}</text>',
        f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {HEIGHT / 2})">{escape(ylabel + (" (log10)" if logy else ""))}</text>',
    ]
    for v in _ticks(x0, x1):
        out.append(f'<text x="{sx(v):.1f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle" '
                   f'font-size="11">{v:.3g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN["left"] - 6}" y="{sy(v) + 4:.1f}" text-anchor="end" '
                   f'font-size="11">{v:.3g}</text>')
    for i, (label, pts, style) in enumerate(cleaned):
        color = COLORS[i % len(COLORS)]
        if style == "line" and len(pts) > 1:
            path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        else:
            out.extend(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>'
                       for x, y in pts)
        out.append(f'<text x="{MARGIN["left"] + 10}" y="{MARGIN["top"] + 16 + 16 * i}" '
                   f'font-size="12" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
