"""Poincare-disk SVG pictures of tesselations and pavings.

Geodesics are drawn as circular arcs meeting the unit circle at right
angles.  Output is a pure function of the input, so equal inputs give
byte-identical files.
"""

from __future__ import annotations

import math

from .farey import FareyVertex

SIZE = 400
RADIUS = 190.0


def disk_point(v: FareyVertex) -> tuple[float, float]:
    """Boundary point of ``p/q`` under the Cayley map (0 -> -1, oo -> 1, 1 -> -i)."""
    p, q = v.p, v.q
    n = p * p + q * q
    return ((p * p - q * q) / n, -2 * p * q / n)


def _screen(x: float, y: float) -> tuple[float, float]:
    c = SIZE / 2
    return c + RADIUS * x, c - RADIUS * y


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def arc_path(a: FareyVertex, b: FareyVertex) -> str:
    (x1, y1), (x2, y2) = disk_point(a), disk_point(b)
    sx1, sy1 = _screen(x1, y1)
    sx2, sy2 = _screen(x2, y2)
    dot = x1 * x2 + y1 * y2
    cross = x1 * y2 - y1 * x2
    if abs(cross) < 1e-12:  # diameter
        return f"M {_f(sx1)} {_f(sy1)} L {_f(sx2)} {_f(sy2)}"
    r = RADIUS * math.sqrt((1 - dot) / (1 + dot))  # tan of half the angle
    sweep = 0 if cross > 0 else 1
    return f"M {_f(sx1)} {_f(sy1)} A {_f(r)} {_f(r)} 0 0 {sweep} {_f(sx2)} {_f(sy2)}"


def render_svg(t, depth: int, removed=frozenset(), title: str | None = None) -> str:
    """SVG of the edges of ``t`` near the base triangle.

    Edges whose orbit key is in ``removed`` are dashed; the distinguished
    oriented edge gets an arrow.
    """
    if not 0 <= depth <= 10:
        raise ValueError("depth must be between 0 and 10")
    edges = sorted(t.edges_to_depth(depth), key=lambda e: (str(e[0]), str(e[1])))
    c = SIZE / 2
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out += [
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z" fill="#c00"/></marker></defs>',
        f'<circle cx="{_f(c)}" cy="{_f(c)}" r="{_f(RADIUS)}" fill="none" stroke="#000" stroke-width="1"/>',
    ]
    for a, b in edges:
        dashed = t.ukey(a, b) in removed
        cls = "edge removed" if dashed else "edge"
        extra = ' stroke-dasharray="4 3"' if dashed else ""
        out.append(f'<path class="{cls}" data-edge="{a} {b}" d="{arc_path(a, b)}" '
                   f'fill="none" stroke="#246" stroke-width="0.6"{extra}/>')
    a, b = t.doe
    out.append(f'<path class="doe" data-edge="{a} {b}" d="{arc_path(a, b)}" fill="none" '
               f'stroke="#c00" stroke-width="1.5" marker-end="url(#arrow)"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
