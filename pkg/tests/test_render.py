"""Tests for SVG rendering."""

import pytest

from perturbcross.model import PipeOrderSet, Point, build_instance
from perturbcross.render import InstanceRenderer, Theme, render_svg


def test_one_path_per_pipe(tri6):
    """Test that without orders each pipe is a single path."""
    svg = render_svg(tri6)

    assert "<svg" in svg
    assert svg.count("<path") == 3
    assert svg.count("<circle") == 3
    assert ">c0</text>" in svg


def test_strands_follow_orders(tri6):
    """Test that given orders every strand gets its own path."""
    orders = PipeOrderSet({"p0": ("e0", "e3"), "p1": ("e1", "e4"), "p2": ("e2", "e5")})

    assert render_svg(tri6, orders).count("<path") == 6


def test_theme_colors(tri6):
    """Test that the theme reaches the output."""
    drawing = InstanceRenderer(Theme(background="#000000")).render(tri6)

    assert "#000000" in drawing.as_svg()


def test_crossings_are_marked():
    """Test that pipe crossings are drawn as extra dots."""
    positions = {"a": (0, 0), "b": (2, 0), "c": (2, 2), "d": (0, 2)}
    points = {c: Point.of(*xy) for c, xy in positions.items()}
    pipes = [("ac", "a", "c"), ("bd", "b", "d"), ("ab", "a", "b")]
    vertex_map = {"g0": "a", "g1": "c", "g2": "b", "g3": "d"}
    edges = {"e0": ("g0", "g1"), "e1": ("g2", "g3")}
    instance = build_instance(points, pipes, vertex_map, edges)

    assert render_svg(instance).count("<circle") == 4 + 1


def test_needs_a_drawing():
    """Test that an instance without positions cannot be drawn."""
    instance = build_instance({"a": None, "b": None}, [("ab", "a", "b")], {"g0": "a", "g1": "b"}, {"e0": ("g0", "g1")})

    with pytest.raises(ValueError, match="drawing"):
        render_svg(instance)
