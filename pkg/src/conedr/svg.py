"""Static SVG of a trajectory over its two cones.

World coordinates are emitted unchanged except for a y flip (``svg_y = -y``),
so marker positions can be read back exactly.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .cones import ConeKind, PlanarCone, direction, support_arcs

_ARC_SEGMENTS = 96
_STYLES = ("#4c72b0", "#dd8452", "#55a868")


def _bbox(points: np.ndarray) -> tuple[float, float, float, float]:
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    w, h = hi - lo
    pad = 0.1 * max(w, h)
    if pad == 0.0:
        pad = 0.1 * max(1.0, float(np.abs(points).max()))
    return float(lo[0] - pad), float(lo[1] - pad), float(hi[0] + pad), float(hi[1] + pad)


def _pt(x: float, y: float) -> str:
    return f"{x!r},{-y!r}"


def _cone_paths(c: PlanarCone, radius: float) -> list[str]:
    """SVG path data for the part of a cone inside a disc of the given radius."""
    if c.kind is ConeKind.ZERO:
        return []
    if c.kind is ConeKind.PLANE:
        r = radius
        return [f"M {_pt(-r, -r)} L {_pt(r, -r)} L {_pt(r, r)} L {_pt(-r, r)} Z"]
    if c.kind in (ConeKind.RAY, ConeKind.LINE):
        out = []
        for start, _ in support_arcs(c):
            u = radius * direction(start)
            out.append(f"M {_pt(0.0, 0.0)} L {_pt(u[0], u[1])}")
        return out
    paths = []
    for start, width in support_arcs(c):
        n = max(2, int(math.ceil(_ARC_SEGMENTS * width / (2 * math.pi))))
        ts = start + width * np.arange(n + 1) / n
        pts = " L ".join(_pt(radius * math.cos(t), radius * math.sin(t)) for t in ts)
        paths.append(f"M {_pt(0.0, 0.0)} L {pts} Z")
    return paths


def render_svg(points, cones: list[tuple[str, PlanarCone]], width_px: int = 600) -> str:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("cannot render an empty trajectory")
    x0, y0, x1, y1 = _bbox(pts)
    w, h = x1 - x0, y1 - y0
    radius = 2.0 * max(math.hypot(x, y) for x in (x0, x1) for y in (y0, y1))
    stroke = max(w, h) / 300.0
    height_px = max(1, int(round(width_px * h / w)))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
        f'viewBox="{x0!r} {-y1!r} {w!r} {h!r}">',
        f'<defs><clipPath id="viewport"><rect x="{x0!r}" y="{-y1!r}" width="{w!r}" '
        f'height="{h!r}"/></clipPath></defs>',
        '<g clip-path="url(#viewport)">',
    ]
    for i, (label, cone) in enumerate(cones):
        color = _STYLES[i % len(_STYLES)]
        for d in _cone_paths(cone, radius):
            out.append(
                f'<path class="cone" data-cone={quoteattr(label)} d="{d}" fill="{color}" '
                f'fill-opacity="0.25" stroke="{color}" stroke-width="{stroke!r}"/>')
    out.append("</g>")
    poly = " ".join(_pt(float(x), float(y)) for x, y in pts)
    out.append(f'<polyline class="trajectory" points="{poly}" fill="none" stroke="black" '
               f'stroke-width="{stroke!r}"/>')
    r = 2.5 * stroke
    for k, (x, y) in enumerate(pts):
        out.append(f'<circle class="iterate" data-iter="{k}" cx="{float(x)!r}" '
                   f'cy="{-float(y)!r}" r="{r!r}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
