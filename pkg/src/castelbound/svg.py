"""SVG wall diagrams in the (b, a) half-plane.

Geometry arrives exact; floats appear only when coordinates are written out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional
from xml.sax.saxutils import escape

from .tiltwalls import ChernH, Semicircle, Vertical


@dataclass
class SvgDiagram:
    walls: list = field(default_factory=list)  # (label, WallGeometry)
    b_marker: Optional[object] = None  # b_d, Fraction or Surd
    shade: Optional[tuple] = None  # (b_lo, b_hi)
    hyperbola: Optional[ChernH] = None
    width: int = 640
    height: int = 360
    pad: int = 30

    def _extent(self) -> tuple[float, float, float]:
        xs, tops = [0.0], [1.0]
        for _, w in self.walls:
            if isinstance(w, Semicircle):
                r = float(w.radius_sq) ** 0.5
                xs += [float(w.center) - r, float(w.center) + r]
                tops.append(r)
            elif isinstance(w, Vertical):
                xs.append(float(w.b))
        if self.b_marker is not None:
            xs.append(float(self.b_marker))
        lo, hi = min(xs) - 0.5, max(xs) + 0.5
        return lo, hi, max(tops) * 1.15

    def render(self) -> str:
        lo, hi, top = self._extent()
        w, h, p = self.width, self.height, self.pad
        sx = (w - 2 * p) / (hi - lo)
        sy = (h - 2 * p) / top

        def X(b: float) -> float:
            return p + (b - lo) * sx

        def Y(a: float) -> float:
            return h - p - a * sy

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
               f'viewBox="0 0 {w} {h}">',
               '<rect width="100%" height="100%" fill="white"/>']
        if self.shade is not None:
            b0, b1 = sorted(float(x) for x in self.shade)
            out.append(f'<rect x="{X(b0):.2f}" y="{p}" width="{(b1 - b0) * sx:.2f}" '
                       f'height="{h - 2 * p}" fill="#e8f0ff"/>')
        out.append(f'<line x1="{p}" y1="{Y(0):.2f}" x2="{w - p}" y2="{Y(0):.2f}" stroke="black"/>')
        out.append(f'<line x1="{X(0):.2f}" y1="{p}" x2="{X(0):.2f}" y2="{h - p}" stroke="#999"/>')
        if self.hyperbola is not None:
            pts = self._hyperbola_points(lo, hi, top)
            for seg in pts:
                if len(seg) > 1:
                    path = " ".join(f"{X(b):.2f},{Y(a):.2f}" for b, a in seg)
                    out.append(f'<polyline points="{path}" fill="none" stroke="#c60" '
                               f'stroke-dasharray="4 3"/>')
        for label, wall in self.walls:
            if isinstance(wall, Semicircle):
                c, r = float(wall.center), float(wall.radius_sq) ** 0.5
                out.append(f'<path d="M {X(c - r):.2f} {Y(0):.2f} A {r * sx:.2f} {r * sy:.2f} 0 0 1 '
                           f'{X(c + r):.2f} {Y(0):.2f}" fill="none" stroke="#036"/>')
                out.append(f'<text x="{X(c):.2f}" y="{Y(r) - 4:.2f}" font-size="10" '
                           f'text-anchor="middle">{escape(label)}</text>')
            elif isinstance(wall, Vertical):
                out.append(f'<line x1="{X(float(wall.b)):.2f}" y1="{p}" x2="{X(float(wall.b)):.2f}" '
                           f'y2="{Y(0):.2f}" stroke="#036"/>')
        if self.b_marker is not None:
            bx = X(float(self.b_marker))
            out.append(f'<line x1="{bx:.2f}" y1="{p}" x2="{bx:.2f}" y2="{Y(0):.2f}" '
                       f'stroke="red" stroke-dasharray="2 2"/>')
            out.append(f'<text x="{bx:.2f}" y="{p - 6}" font-size="10" fill="red" '
                       f'text-anchor="middle">b_d</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def _hyperbola_points(self, lo: float, hi: float, top: float) -> list:
        # Re Z = 0:  a^2 r / 2 = c2 - b c1 + b^2 r / 2
        ch = self.hyperbola
        r, c, e = float(ch.c0), float(ch.c1), float(ch.c2)
        if r == 0:
            return []
        segs, cur = [], []
        steps = 400
        for i in range(steps + 1):
            b = lo + (hi - lo) * i / steps
            a_sq = (2 * e - 2 * b * c + b * b * r) / r
            if 0 <= a_sq <= top * top:
                cur.append((b, a_sq ** 0.5))
            elif cur:
                segs.append(cur)
                cur = []
        if cur:
            segs.append(cur)
        return segs


def write_svg(path: str, diagram: SvgDiagram) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(diagram.render())
