"""Self-contained SVG rendering of uncertainty diagrams.

Static 600x600 scatter over the integer lattice 1..d: dashed product-bound
hyperbola, dot-dashed support-uncertainty edge line, and one marker per
realized point (square = CLASSICAL, diamond = NONCLASSICAL, hexagon = MIXED).
EMPTY lattice points are drawn as small dots only when requested.
"""

from __future__ import annotations

import json
import math

from .diagram import CLASSICAL, EMPTY, MIXED, NONCLASSICAL, Diagram, DiagramPoint

_VIEW = 600
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 24, 24, 56
_COLORS = {CLASSICAL: "#c62828", NONCLASSICAL: "#1565c0", MIXED: "#ad1fad", EMPTY: "#b0b0b0"}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    def __init__(self, d: int):
        self.d = d
        self.lo, self.hi = 0.5, d + 0.5
        self.px_w = _VIEW - _MARGIN_L - _MARGIN_R
        self.px_h = _VIEW - _MARGIN_T - _MARGIN_B

    def x(self, v: float) -> float:
        return _MARGIN_L + (v - self.lo) / (self.hi - self.lo) * self.px_w

    def y(self, v: float) -> float:
        return _VIEW - _MARGIN_B - (v - self.lo) / (self.hi - self.lo) * self.px_h


def _marker(frame: _Frame, p: DiagramPoint) -> str:
    cx, cy = frame.x(p.n_a), frame.y(p.n_b)
    color = _COLORS[p.classification]
    size = 7.0
    if p.classification == CLASSICAL:
        return (
            f'<rect class="marker" x="{_fmt(cx - size)}" y="{_fmt(cy - size)}" '
            f'width="{_fmt(2 * size)}" height="{_fmt(2 * size)}" fill="{color}"/>'
        )
    if p.classification == NONCLASSICAL:
        pts = [(cx, cy - 1.35 * size), (cx + 1.35 * size, cy), (cx, cy + 1.35 * size), (cx - 1.35 * size, cy)]
    elif p.classification == MIXED:
        pts = [
            (cx + 1.2 * size * math.cos(math.pi / 6 + i * math.pi / 3),
             cy + 1.2 * size * math.sin(math.pi / 6 + i * math.pi / 3))
            for i in range(6)
        ]
    else:
        return f'<circle class="marker" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.50" fill="{color}"/>'
    body = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
    return f'<polygon class="marker" points="{body}" fill="{color}"/>'


def svg_document(diagram: Diagram, meta: dict | None = None, grid: bool = False) -> str:
    """Render the diagram as a standalone SVG string (inline styles only)."""
    d = diagram.d
    frame = _Frame(d)
    lines: list[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_VIEW}" height="{_VIEW}" '
        f'viewBox="0 0 {_VIEW} {_VIEW}">'
    )
    if meta is not None:
        lines.append(f"<!-- {json.dumps(meta, sort_keys=True)} -->")
    lines.append(f'<rect x="0" y="0" width="{_VIEW}" height="{_VIEW}" fill="white"/>')

    x0, y0 = frame.x(frame.lo), frame.y(frame.lo)
    x1, y1 = frame.x(frame.hi), frame.y(frame.hi)
    lines.append(
        f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" width="{_fmt(x1 - x0)}" height="{_fmt(y0 - y1)}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for v in range(1, d + 1):
        px, py = frame.x(v), frame.y(v)
        lines.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(y0)}" x2="{_fmt(px)}" y2="{_fmt(y0 + 5)}" '
            'stroke="#333333" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_fmt(px)}" y="{_fmt(y0 + 20)}" font-family="sans-serif" font-size="13" '
            f'text-anchor="middle" fill="#333333">{v}</text>'
        )
        lines.append(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(py)}" x2="{_fmt(x0)}" y2="{_fmt(py)}" '
            'stroke="#333333" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_fmt(x0 - 10)}" y="{_fmt(py + 4)}" font-family="sans-serif" font-size="13" '
            f'text-anchor="end" fill="#333333">{v}</text>'
        )
    lines.append(
        f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(y0 + 40)}" font-family="sans-serif" '
        'font-size="15" text-anchor="middle" fill="#333333">n_A</text>'
    )
    lines.append(
        f'<text x="{_fmt(x0 - 40)}" y="{_fmt((y0 + y1) / 2)}" font-family="sans-serif" '
        f'font-size="15" text-anchor="middle" fill="#333333" '
        f'transform="rotate(-90 {_fmt(x0 - 40)} {_fmt((y0 + y1) / 2)})">n_B</text>'
    )

    # dashed hyperbola n_a * n_b = hyperbola_constant
    hc = diagram.hyperbola_constant
    xs_lo = max(frame.lo, hc / frame.hi)
    if xs_lo < frame.hi:
        steps = 256
        pts = []
        for i in range(steps + 1):
            vx = xs_lo + (frame.hi - xs_lo) * i / steps
            vy = hc / vx
            if frame.lo <= vy <= frame.hi:
                pts.append(f"{_fmt(frame.x(vx))},{_fmt(frame.y(vy))}")
        if len(pts) >= 2:
            lines.append(
                f'<polyline class="hyperbola" points="{" ".join(pts)}" fill="none" '
                'stroke="#444444" stroke-width="1.5" stroke-dasharray="7,5"/>'
            )

    # dot-dashed edge line n_a + n_b = d + 1
    edge = diagram.edge
    ex0, ey0 = edge - frame.hi, frame.hi
    ex1, ey1 = frame.hi, edge - frame.hi
    lines.append(
        f'<line class="edge" x1="{_fmt(frame.x(ex0))}" y1="{_fmt(frame.y(ey0))}" '
        f'x2="{_fmt(frame.x(ex1))}" y2="{_fmt(frame.y(ey1))}" '
        'stroke="#444444" stroke-width="1.5" stroke-dasharray="10,4,2,4"/>'
    )

    realized = diagram.realized()
    if grid:
        for n_a in range(1, d + 1):
            for n_b in range(1, d + 1):
                if (n_a, n_b) not in realized:
                    lines.append(_marker(frame, DiagramPoint(n_a, n_b, EMPTY, float("nan"), 0)))
    for p in diagram.points:
        lines.append(_marker(frame, p))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(diagram: Diagram, path, meta: dict | None = None, grid: bool = False) -> None:
    """Write the diagram SVG to ``path``."""
    doc = svg_document(diagram, meta, grid)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc)
