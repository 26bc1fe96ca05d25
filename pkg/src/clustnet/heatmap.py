"""Minimal SVG heatmaps with a logarithmic colour scale."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

# viridis anchor colours
_RAMP = [
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
]
MISSING = "#bbbbbb"


def ramp(t: float) -> str:
    t = min(1.0, max(0.0, t))
    for (t0, c0), (t1, c1) in zip(_RAMP, _RAMP[1:]):
        if t <= t1:
            f = (t - t0) / (t1 - t0)
            rgb = tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
            return "#%02x%02x%02x" % rgb
    return "#%02x%02x%02x" % _RAMP[-1][1]


def log_range(*grids: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Shared (min, max) over the positive finite entries of several grids."""
    vals = [v for g in grids for row in g for v in row
            if v is not None and math.isfinite(v) and v > 0]
    if not vals:
        return 1.0, 10.0
    lo, hi = min(vals), max(vals)
    if lo == hi:
        lo, hi = lo / 10, hi * 10
    return lo, hi


def _fmt(v: float) -> str:
    return f"{v:.3g}"


def heatmap_svg(values: Sequence[Sequence[float]], xs: Sequence[float], ys: Sequence[float],
                title: str, vrange: tuple[float, float],
                xlabel: str = "lambda", ylabel: str = "mu", cell: int = 28) -> str:
    """Render ``values[iy][ix]``; x runs left to right, y bottom to top."""
    lo, hi = vrange
    llo, lhi = math.log10(lo), math.log10(hi)
    nx, ny = len(xs), len(ys)
    left, top, bar = 70, 30, 16
    width = left + nx * cell + 90
    height = top + ny * cell + 60
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="9">',
        f'<text x="{left}" y="18" font-size="12">{escape(title)}</text>',
    ]
    for iy in range(ny):
        y = top + (ny - 1 - iy) * cell
        for ix in range(nx):
            v = values[iy][ix]
            if v is None or not math.isfinite(v) or v <= 0:
                color = MISSING
            else:
                color = ramp((math.log10(v) - llo) / (lhi - llo))
            x = left + ix * cell
            out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{color}">'
                       f'<title>{xlabel}={_fmt(xs[ix])} {ylabel}={_fmt(ys[iy])} value={v}</title></rect>')
        out.append(f'<text x="{left - 4}" y="{y + cell / 2 + 3}" text-anchor="end">{_fmt(ys[iy])}</text>')
    base = top + ny * cell
    for ix in range(nx):
        x = left + ix * cell + cell / 2
        out.append(f'<text x="{x}" y="{base + 12}" text-anchor="end" '
                   f'transform="rotate(-45 {x} {base + 12})">{_fmt(xs[ix])}</text>')
    out.append(f'<text x="{left + nx * cell / 2}" y="{height - 4}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="12" y="{top + ny * cell / 2}" text-anchor="middle" '
               f'transform="rotate(-90 12 {top + ny * cell / 2})">{ylabel}</text>')
    # colour bar
    bx = left + nx * cell + 16
    steps = 20
    h = ny * cell / steps
    for k in range(steps):
        t = (k + 0.5) / steps
        out.append(f'<rect x="{bx}" y="{top + ny * cell - (k + 1) * h:.2f}" width="{bar}" '
                   f'height="{h + 0.5:.2f}" fill="{ramp(t)}"/>')
    out.append(f'<text x="{bx + bar + 3}" y="{top + ny * cell}">{_fmt(lo)}</text>')
    out.append(f'<text x="{bx + bar + 3}" y="{top + 8}">{_fmt(hi)}</text>')
    out.append(f'<text x="{bx}" y="{top - 6}">log scale</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
