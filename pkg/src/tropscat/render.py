"""Static SVG pictures of scattering diagrams.

Output depends only on the diagram, so identical input gives identical bytes.
"""
from __future__ import annotations

from math import hypot
from xml.sax.saxutils import escape

from .scattering import Diagram

SIZE = 480
RADIUS = 170.0


def leading_term(f) -> str:
    v = f.valuation()
    return "0" if v is None else str(f.homogeneous_part(v))


def _xy(direction, r):
    a, b = direction
    n = hypot(a, b)
    # SVG y axis points down
    return SIZE / 2 + r * a / n, SIZE / 2 - r * b / n


def render_svg(d: Diagram) -> str:
    c = SIZE / 2
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}" font-family="monospace" font-size="9">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        '<g class="axes" stroke="#cccccc" stroke-width="0.5" stroke-dasharray="3,3">',
        f'<line x1="0" y1="{c:.3f}" x2="{SIZE}" y2="{c:.3f}"/>',
        f'<line x1="{c:.3f}" y1="0" x2="{c:.3f}" y2="{SIZE}"/>',
        "</g>",
    ]
    for i, w in enumerate(d.walls):
        colour = "#1f4e9c" if w.support.kind == "line" else "#b0302a"
        label = f"m=({w.mode[0]},{w.mode[1]}): {leading_term(w.log_factor)}"
        for k, ray in enumerate(w.support.rays()):
            x, y = _xy(ray, RADIUS)
            tx, ty = _xy(ray, RADIUS + 8)
            anchor = "start" if ray[0] > 0 else ("end" if ray[0] < 0 else "middle")
            out.append(f'<line class="wall" data-wall="{i}" data-ray="{k}" x1="{c:.3f}" y1="{c:.3f}" '
                       f'x2="{x:.3f}" y2="{y:.3f}" stroke="{colour}" stroke-width="1.2"/>')
            out.append(f'<text x="{tx:.3f}" y="{ty:.3f}" text-anchor="{anchor}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
