"""SVG pictures of instances.

This module provides:
- InstanceRenderer: Draws the host drawing with pipe weights and crossings
- render_svg: One-call helper returning SVG text
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import drawsvg as draw

from perturbcross.geometry import pipe_crossings
from perturbcross.model import Instance, PipeOrderSet, Point


@dataclass(frozen=True)
class Theme:
    """Colors and sizes used by the renderer."""

    background: str = "#ffffff"
    pipe_color: str = "#9aa5b1"
    strand_color: str = "#1f4e79"
    cluster_color: str = "#2d3436"
    crossing_color: str = "#d63031"
    label_color: str = "#2d3436"
    scale: float = 60.0
    padding: float = 40.0
    cluster_radius: float = 5.0
    strand_gap: float = 3.0
    font_size: float = 11.0


DEFAULT_THEME = Theme()


class InstanceRenderer:
    """Renders an instance's host drawing to SVG.

    Pipes are drawn as polylines whose width grows with their weight and
    are labelled with it. Pipe crossings are marked in red. Given pipe
    orders, every pipe is drawn as its strands side by side, the first
    strand of the order on the right when walking from tail to head.
    """

    def __init__(self, theme: Theme | None = None) -> None:
        self.theme = theme or DEFAULT_THEME

    def render(self, instance: Instance, orders: PipeOrderSet | None = None) -> draw.Drawing:
        host = instance.host
        if not host.is_geometric:
            raise ValueError("Only instances with a drawing can be rendered")
        points = [p for pipe in host.pipes.values() for p in pipe.polyline or ()]
        points += [host.position(c) for c in host.clusters]
        min_x = min(float(p.x) for p in points)
        max_x = max(float(p.x) for p in points)
        min_y = min(float(p.y) for p in points)
        max_y = max(float(p.y) for p in points)
        t = self.theme
        width = (max_x - min_x) * t.scale + 2 * t.padding
        height = (max_y - min_y) * t.scale + 2 * t.padding

        def to_canvas(p: Point) -> tuple[float, float]:
            # SVG y grows downwards
            return (
                (float(p.x) - min_x) * t.scale + t.padding,
                (max_y - float(p.y)) * t.scale + t.padding,
            )

        d = draw.Drawing(width, height)
        d.append(draw.Rectangle(0, 0, width, height, fill=t.background))

        for pid in sorted(host.pipes):
            pipe = host.pipes[pid]
            assert pipe.polyline is not None
            canvas = [to_canvas(p) for p in pipe.polyline]
            weight = instance.weight(pid)
            if orders is not None and pid in orders.orders and weight > 1:
                self._render_strands(d, canvas, pipe.tail == pipe.u, len(orders.orders[pid]))
            else:
                self._render_polyline(d, canvas, t.pipe_color, 1.0 + 1.5 * math.log2(1 + weight))
            self._render_label(d, canvas, str(weight))

        _, crossings = pipe_crossings(host, with_points=True)
        for point in crossings:
            cx, cy = to_canvas(point)
            d.append(draw.Circle(cx, cy, 2.5, fill=t.crossing_color))

        for cid in sorted(host.clusters):
            cx, cy = to_canvas(host.position(cid))
            d.append(draw.Circle(cx, cy, t.cluster_radius, fill=t.cluster_color))
            d.append(
                draw.Text(cid, t.font_size, cx + t.cluster_radius + 2, cy - t.cluster_radius - 2,
                          fill=t.label_color, font_family="sans-serif")
            )
        return d

    def _render_polyline(self, d: draw.Drawing, canvas: list[tuple[float, float]], color: str, width: float) -> None:
        path = draw.Path(stroke=color, stroke_width=width, fill="none", stroke_linecap="round")
        path.M(*canvas[0])
        for x, y in canvas[1:]:
            path.L(x, y)
        d.append(path)

    def _render_strands(
        self, d: draw.Drawing, canvas: list[tuple[float, float]], forward: bool, count: int
    ) -> None:
        if not forward:
            canvas = canvas[::-1]
        for index in range(count):
            # index 0 sits on the right of the tail-to-head direction
            offset = ((count - 1) / 2 - index) * self.theme.strand_gap
            shifted = []
            for k, (x, y) in enumerate(canvas):
                a = canvas[max(k - 1, 0)]
                b = canvas[min(k + 1, len(canvas) - 1)]
                dx, dy = b[0] - a[0], b[1] - a[1]
                norm = math.hypot(dx, dy) or 1.0
                # right-hand normal in canvas coordinates (y flipped)
                shifted.append((x - dy / norm * offset, y + dx / norm * offset))
            self._render_polyline(d, shifted, self.theme.strand_color, 1.0)

    def _render_label(self, d: draw.Drawing, canvas: list[tuple[float, float]], text: str) -> None:
        middle = (len(canvas) - 1) // 2
        (ax, ay), (bx, by) = canvas[middle], canvas[middle + 1]
        d.append(
            draw.Text(text, self.theme.font_size, (ax + bx) / 2 + 4, (ay + by) / 2 - 4,
                      fill=self.theme.label_color, font_family="sans-serif")
        )


def render_svg(instance: Instance, orders: PipeOrderSet | None = None, theme: Theme | None = None) -> str:
    """SVG text for an instance, optionally with strands laid out by ``orders``.

    Raises:
        ValueError: If the instance has no drawing
        DegenerateDrawingError: If pipes touch or overlap
    """
    return InstanceRenderer(theme).render(instance, orders).as_svg()
