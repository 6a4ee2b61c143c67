"""Deterministic SVG drawings of point sets, graphs and overlays.

Up-edges are solid, down-edges dashed, edges introduced by both triangles
thick.  Overlays: matching (wide orange), blockers (crosses), triangles
(translucent fills).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from xml.sax.saxutils import escape

from .combinatorics import IntroTriangle
from .geom import UP, Point
from .graph import ProximityGraph

SQRT3 = math.sqrt(3.0)


def _xy(p: Point) -> tuple[float, float]:
    return ((2 * float(p.l1) + float(p.l0)) / SQRT3, float(p.l0))


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(
    points: Sequence[Point],
    graph: ProximityGraph | None = None,
    *,
    matching: Iterable[tuple[int, int]] = (),
    blockers: Sequence[Point] = (),
    triangles: Sequence[IntroTriangle] = (),
    size: int = 600,
    margin: int = 20,
    labels: bool = False,
) -> str:
    all_xy = [_xy(p) for p in list(points) + list(blockers)]
    for it in triangles:
        all_xy.extend(_xy(c) for c in it.triangle.corners())
    if all_xy:
        xs = [x for x, _ in all_xy]
        ys = [y for _, y in all_xy]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = (size - 2 * margin) / span

    def tx(x: float, y: float) -> tuple[str, str]:
        # flip y so that larger l0 is drawn higher
        return _fmt(margin + (x - x0) * scale), _fmt(size - margin - (y - y0) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect class="frame" x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>',
    ]
    for it in triangles:
        pts = " ".join(",".join(tx(*_xy(c))) for c in it.triangle.corners())
        fill = "#4a90d9" if it.triangle.orientation == UP else "#d94a4a"
        out.append(f'<polygon class="triangle" points="{pts}" fill="{fill}" fill-opacity="0.18" stroke="none"/>')
    if graph is not None:
        for (u, v), (up, down) in sorted(graph.edges.items()):
            (ax, ay), (bx, by) = tx(*_xy(points[u])), tx(*_xy(points[v]))
            if up and down:
                style, cls = 'stroke-width="2.5"', "edge both"
            elif up:
                style, cls = 'stroke-width="1"', "edge up"
            else:
                style, cls = 'stroke-width="1" stroke-dasharray="4 3"', "edge down"
            out.append(f'<line class="{cls}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="black" {style}/>')
    for u, v in sorted(tuple(sorted(e)) for e in matching):
        (ax, ay), (bx, by) = tx(*_xy(points[u])), tx(*_xy(points[v]))
        out.append(
            f'<line class="matching" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="#e08a00" '
            f'stroke-width="5" stroke-opacity="0.8"/>'
        )
    for i, p in enumerate(points):
        cx, cy = tx(*_xy(p))
        out.append(f'<circle class="point" cx="{cx}" cy="{cy}" r="3.5" fill="black"/>')
        if labels:
            out.append(f'<text x="{cx}" y="{cy}" dx="5" dy="-5" font-size="10">{escape(str(i))}</text>')
    for b in blockers:
        x, y = _xy(b)
        px, py = margin + (x - x0) * scale, size - margin - (y - y0) * scale
        d = 4
        out.append(
            f'<path class="blocker" d="M{_fmt(px - d)},{_fmt(py - d)} L{_fmt(px + d)},{_fmt(py + d)} '
            f'M{_fmt(px - d)},{_fmt(py + d)} L{_fmt(px + d)},{_fmt(py - d)}" stroke="#c00000" stroke-width="1.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
