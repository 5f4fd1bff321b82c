"""Disc-model SVG pictures of a representation.

Everything is computed in the half-plane and only mapped to the disc by the
Cayley map when drawing.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .fibration import NotInMaximalComponent, ts_decompose
from .geom2 import Kind, axis, cayley, center, classify
from .groups import Representation, g_from_r

SIZE = 640
RADIUS = 300.0
STYLE = {
    "axis": 'stroke="#4477aa" stroke-width="1.2" fill="none"',
    "G": 'stroke="#cc3311" stroke-width="3" fill="none"',
    "t": 'fill="#228833" stroke="none"',
    "s": 'fill="#ee7733" stroke="none"',
    "q": 'fill="#000000" stroke="none"',
    "fixed": 'fill="#4477aa" stroke="none"',
}


def _screen(w: complex) -> tuple[float, float]:
    c = SIZE / 2
    return c + RADIUS * w.real, c - RADIUS * w.imag


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def geodesic_path(x, y, style: str) -> str:
    """Path element for the geodesic between boundary points ``x`` and ``y``."""
    u1, u2 = cayley(x), cayley(y)
    (x1, y1), (x2, y2) = _screen(u1), _screen(u2)
    dot = u1.real * u2.real + u1.imag * u2.imag
    cross = u1.real * u2.imag - u1.imag * u2.real
    if abs(cross) < 1e-9:
        return f'<path d="M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}" {style}/>'
    # circle orthogonal to the unit circle through u1 and u2
    c = (u1 + u2) / (1.0 + dot)
    r = RADIUS * abs(c - u1)
    cx, cy = _screen(c)
    turn = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if turn > 0 else 0
    return (
        f'<path d="M {_fmt(x1)} {_fmt(y1)} A {_fmt(r)} {_fmt(r)} 0 0 {sweep} '
        f'{_fmt(x2)} {_fmt(y2)}" {style}/>'
    )


def _dot(z, style: str, radius: float = 3.5, title: str = "") -> str:
    px, py = _screen(cayley(z))
    inner = f"<title>{escape(title)}</title>" if title else ""
    return f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{radius}" {style}>{inner}</circle>'


def render(rep: Representation, title: str = "") -> str:
    """SVG text: generator axes, half-turn centers, fixed points, and the axis G of ``g_1``."""
    grep = g_from_r(rep) if rep.kind == "H" else rep
    items = []
    for i, g in enumerate(grep.images, 1):
        if classify(g).kind is not Kind.HYPERBOLIC:
            continue
        ax = axis(g)
        items.append(geodesic_path(ax.src, ax.dst, STYLE["axis"]))
        items.append(_dot(ax.src, STYLE["fixed"], 2.5, f"repeller of g_{i}"))
        items.append(_dot(ax.dst, STYLE["fixed"], 2.5, f"attractor of g_{i}"))
    if classify(grep[1]).kind is Kind.HYPERBOLIC:
        big = axis(grep[1])
        items.append(geodesic_path(big.src, big.dst, STYLE["G"]))
    try:
        ts = ts_decompose(grep)
    except (NotInMaximalComponent, ValueError):
        ts = None
    if ts is not None:
        for i in range(2, grep.n):
            items.append(_dot(ts.centers[i], STYLE["t"], 4.0, f"t_{i}"))
        for i in range(1, grep.n + 1):
            items.append(_dot(center(ts.s[i]), STYLE["s"], 3.0, f"s_{i}"))
    if rep.kind == "H":
        for i, r in enumerate(rep.images, 1):
            items.append(_dot(center(r), STYLE["q"], 3.0, f"q_{i}"))
    c = SIZE / 2
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title or f'{rep.kind}_{rep.n} representation')}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#000000" stroke-width="1.5"/>',
    ]
    return "\n".join(head + items + ["</svg>"]) + "\n"
