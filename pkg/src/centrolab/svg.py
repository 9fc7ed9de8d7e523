"""Minimal deterministic SVG rendering of closed plane curves.

The viewport is the curve bounding box with a five percent margin and the
stroke width is half a percent of the box size, so figures of very different
scales come out visually identical.
"""

from __future__ import annotations

import numpy as np

__all__ = ["curve_svg"]


def _fmt(value: float) -> str:
    return f"{value:.8g}"


def _polyline(points, stroke, width, dashed=False, fill="none"):
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    dash = ' stroke-dasharray="4,3"' if dashed else ""
    return (
        f'<polyline points="{coords}" fill="{fill}" stroke="{stroke}" '
        f'stroke-width="{_fmt(width)}" stroke-linejoin="round"{dash}/>'
    )


def curve_svg(
    points,
    vertices=None,
    conics=None,
    size: int = 640,
    margin: float = 0.05,
    title: str | None = None,
) -> str:
    """Render a closed polyline, optionally with vertex markers and osculating
    conic ghosts (each conic given as a sampled polyline)."""
    pts = np.asarray(points, dtype=float)
    all_pts = [pts]
    if conics:
        all_pts.extend(np.asarray(c, dtype=float) for c in conics)
    stack = np.vstack(all_pts)
    lo = stack.min(axis=0)
    hi = stack.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = margin * span.max()
    x0, y0 = lo - pad
    w, h = (hi - lo) + 2 * pad
    stroke = 0.005 * max(w, h)

    # flip the y axis so positive orientation looks counterclockwise
    def flip(arr):
        out = arr.copy()
        out[:, 1] = (y0 + h) - (out[:, 1] - y0)
        return out

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">'
    ]
    if title:
        parts.append(f"<title>{title}</title>")
    if conics:
        for conic in conics:
            parts.append(_polyline(flip(np.asarray(conic, dtype=float)), "#999999", stroke * 0.6, dashed=True))
    parts.append(_polyline(flip(pts), "#1f3a5f", stroke))
    if vertices is not None and len(vertices):
        verts = flip(np.asarray(vertices, dtype=float))
        radius = 1.8 * stroke
        for x, y in verts:
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" '
                f'fill="#c0392b" stroke="none"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
