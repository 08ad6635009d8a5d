"""Static SVG pictures of geodesics in the upper half-plane or the band model.

Curves are sampled into polylines and all numbers are printed with fixed
precision, so the same figure always serialises to the same bytes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import hyperbolic as hyp
from .hyperbolic import INFINITY, DirectedGeodesic

SAMPLES = 96
WIDTH = 800


@dataclass
class Figure:
    title: str = ""
    model: str = "half-plane"
    items: list = field(default_factory=list)
    focus: list = field(default_factory=list)

    def _to_model(self, z: complex) -> complex:
        if self.model == "band":
            w = cmath.log(z)
            return complex(w.real, w.imag)
        return z

    def line(self, g: DirectedGeodesic, color: str, width: float = 1.5, dash: bool = False, label: str = ""):
        self.items.append(("line", g, color, width, dash, label))

    def segment(self, p: complex, q: complex, color: str, width: float = 2.0, label: str = ""):
        self.items.append(("segment", (p, q), color, width, False, label))
        self.focus.extend([p, q])

    def point(self, z: complex, color: str, label: str = ""):
        self.items.append(("point", z, color, 0.0, False, label))
        self.focus.append(z)

    # ------------------------------------------------------------ sampling

    def _sample_line(self, g: DirectedGeodesic, box) -> list[complex]:
        x0, x1, y0, y1 = box
        p, q = g.start, g.end
        if self.model == "band":
            f = g.standard_map().inverse()
            span = max(abs(x0), abs(x1)) + 10.0
            lo = min(g.param(z) for z in self.focus) - span if self.focus else -span
            hi = max(g.param(z) for z in self.focus) + span if self.focus else span
            return [f(1j * math.exp(lo + (hi - lo) * k / SAMPLES)) for k in range(SAMPLES + 1)]
        if p is INFINITY or q is INFINITY:
            x = q if p is INFINITY else p
            top = y1 * 4
            bottom = max(y0 * 0.25, 1e-12)
            return [complex(x, bottom + (top - bottom) * k / SAMPLES) for k in range(SAMPLES + 1)]
        c, r = (p + q) / 2, abs(q - p) / 2
        return [c + r * cmath.exp(1j * math.pi * (k + 0.5) / (SAMPLES + 1)) for k in range(SAMPLES + 1)]

    def _sample_segment(self, p: complex, q: complex) -> list[complex]:
        d = hyp.dist(p, q)
        if d == 0:
            return [p]
        return [hyp.point_towards(p, q, d * k / SAMPLES) for k in range(SAMPLES + 1)]

    def _box(self):
        pts = [self._to_model(z) for z in self.focus] or [self._to_model(1j)]
        xs = [w.real for w in pts]
        ys = [w.imag for w in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        if self.model == "half-plane":
            y0 = 0.0
        dx = max(x1 - x0, y1 - y0, 1e-6)
        pad = 0.15 * dx
        return x0 - pad, x1 + pad, y0 - (pad if self.model == "band" else 0.0), y1 + pad

    # ------------------------------------------------------------ output

    def render(self) -> str:
        x0, x1, y0, y1 = self._box()
        scale = WIDTH / (x1 - x0)
        height = max(1, round((y1 - y0) * scale))

        def px(w: complex) -> str:
            return f"{(w.real - x0) * scale:.2f},{(y1 - w.imag) * scale:.2f}"

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
            f'viewBox="0 0 {WIDTH} {height}">',
            f"<title>{_escape(self.title)}</title>",
            f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
        ]
        if self.model == "half-plane":
            out.append(f'<line x1="0" y1="{height}" x2="{WIDTH}" y2="{height}" stroke="black" stroke-width="1"/>')
        for kind, obj, color, width, dash, label in self.items:
            if kind == "point":
                out.append(f'<circle cx="{px(self._to_model(obj)).split(",")[0]}" '
                           f'cy="{px(self._to_model(obj)).split(",")[1]}" r="3.5" fill="{color}"/>')
                if label:
                    x, y = px(self._to_model(obj)).split(",")
                    out.append(f'<text x="{float(x) + 5:.2f}" y="{float(y) - 5:.2f}" font-size="12">{_escape(label)}</text>')
                continue
            if kind == "line":
                pts = self._sample_line(obj, (x0, x1, y0, y1))
            else:
                pts = self._sample_segment(*obj)
            path = " ".join(px(self._to_model(z)) for z in pts)
            extra = ' stroke-dasharray="6,4"' if dash else ""
            title = f"<title>{_escape(label)}</title>" if label else ""
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="{width}"{extra} points="{path}">{title}</polyline>'
            )
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
