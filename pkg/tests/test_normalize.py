"""Tests for turning raw drawings into instances."""

import random

import pytest

from perturbcross import DegenerateDrawingError
from perturbcross.formats import RawDrawing, parse_raw_drawing, serialize_instance
from perturbcross.model import Point, Shape, build_instance, touches, validate
from perturbcross.normalize import detect_forks, detect_spurs, induced_drawing, normalize, prune

TRIANGLE = "vertex a 0 0\nvertex b 2 0\nvertex c 1 2\nedge a b\nedge b c\nedge c a\n"

# the edge b-c first runs back along a-b to (1, 0)
DOUBLED_BACK = "vertex a 0 0\nvertex b 2 0\nvertex c 1 1\nedge a b\nedge b c : 1 0\nedge c a\n"


def test_triangle_is_its_own_instance():
    """Test that a plain polygon keeps one pipe per edge."""
    instance = normalize(parse_raw_drawing(TRIANGLE))

    assert len(instance.host.clusters) == 3
    assert len(instance.host.pipes) == 3
    assert set(instance.guest.edges) == {"e0", "e1", "e2"}
    assert validate(instance).admissible
    assert instance.guest.shape == Shape.CYCLE


def test_bends_become_clusters():
    """Test that every bend point becomes a cluster with a new vertex."""
    instance = normalize(parse_raw_drawing("vertex a 0 0\nvertex b 3 0\nedge a b : 1 1 2 1\n"))

    assert len(instance.host.pipes) == 3
    assert len(instance.host.clusters) == 4
    assert set(instance.guest.edges) == {"e0.0", "e0.1", "e0.2"}
    assert instance.map.vertex_map["e0~1"] == "c1"


def test_overlap_shares_pipe_and_makes_spur():
    """Test that doubling back along an edge shares a pipe and leaves a spur."""
    instance = normalize(parse_raw_drawing(DOUBLED_BACK))

    assert len(instance.host.clusters) == 4
    assert len(instance.host.pipes) == 4
    assert instance.weight("p3") == 2
    assert detect_spurs(instance) == ["b"]
    assert validate(instance).admissible


def test_zero_length_segment_rejected():
    """Test that repeated points in an edge are degenerate."""
    raw = RawDrawing(
        {"a": Point.of(0, 0), "b": Point.of(1, 0)},
        {"e0": ("a", "b", (Point.of(0, 0), Point.of(0, 0), Point.of(1, 0)))},
    )

    with pytest.raises(DegenerateDrawingError, match="zero-length"):
        normalize(raw)


def test_detect_forks_on_raw_drawing():
    """Test that a vertex inside a nonincident edge is a fork."""
    raw = parse_raw_drawing(TRIANGLE + "vertex d 1 0\nedge d c : 1 1\n")

    assert detect_forks(raw) == [("d", "e0")]
    assert detect_forks(normalize(raw)) == []


def test_prune_drops_unused_pipes():
    """Test that pruning removes empty pipes and clusters."""
    positions = {"a": Point.of(0, 0), "b": Point.of(2, 0), "c": Point.of(2, 2), "d": Point.of(0, 2), "z": Point.of(5, 5)}
    pipes = [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a"), ("ac", "a", "c"), ("cz", "c", "z")]
    vertex_map = {"g0": "a", "g1": "b", "g2": "c", "g3": "d"}
    edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % 4}") for i in range(4)}
    instance = build_instance(positions, pipes, vertex_map, edges)

    pruned = prune(instance)

    assert set(pruned.host.pipes) == {"ab", "bc", "cd", "da"}
    assert set(pruned.host.clusters) == {"a", "b", "c", "d"}
    assert prune(pruned) is pruned


def test_normalize_is_idempotent():
    """Test that normalizing the induced drawing reproduces the instance."""
    instance = normalize(parse_raw_drawing(DOUBLED_BACK))

    again = normalize(induced_drawing(instance))

    assert serialize_instance(again) == serialize_instance(instance)


def test_induced_drawing_follows_edges(tri6):
    """Test that induced polylines run from the first end to the second."""
    raw = induced_drawing(tri6)

    for a, b, polyline in raw.edges.values():
        assert polyline[0] == raw.vertices[a]
        assert polyline[-1] == raw.vertices[b]


def test_subdivision_ids_avoid_existing_names():
    """Test that names made for subdivided edges never reuse input names."""
    raw = RawDrawing(
        {"a": Point.of(0, 0), "b": Point.of(3, 0), "e0~1": Point.of(3, 3)},
        {
            "e0": ("a", "b", (Point.of(0, 0), Point.of(1, 1), Point.of(2, 1), Point.of(3, 0))),
            "e0.1": ("b", "e0~1", (Point.of(3, 0), Point.of(3, 3))),
        },
    )

    instance = normalize(raw)

    assert len(instance.guest.vertices) == 5
    assert set(instance.guest.edges) == {"e0.0", "e0.1_1", "e0.2", "e0.1"}
    assert instance.guest.edges["e0.1"] == ("b", "e0~1")
    assert instance.host.position(instance.map.vertex_map["e0~1"]) == Point.of(3, 3)
    assert instance.host.position(instance.map.vertex_map["e0~1_1"]) == Point.of(1, 1)


def _random_grid_drawing(rng: random.Random) -> RawDrawing:
    """A closed walk on a small grid, each edge straight or with one bend."""
    while True:
        n = rng.randint(3, 6)
        spots = [Point.of(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(n)]
        vertices = {f"v{i}": spots[i] for i in range(n)}
        edges = {}
        for i in range(n):
            p, q = spots[i], spots[(i + 1) % n]
            polyline = (p, Point.of(rng.randint(0, 3), rng.randint(0, 3)), q) if rng.random() < 0.5 else (p, q)
            edges[f"e{i}"] = (f"v{i}", f"v{(i + 1) % n}", polyline)
        if all(p != q for _, _, line in edges.values() for p, q in zip(line, line[1:])):
            return RawDrawing(vertices, edges)


@pytest.mark.parametrize("seed", range(30))
def test_normalize_keeps_image_and_size_bound(seed):
    """Test that pipes tile every input segment and stay within the size bound."""
    raw = _random_grid_drawing(random.Random(seed))
    segments = [(p, q) for _, _, line in raw.edges.values() for p, q in zip(line, line[1:])]
    points = set(raw.vertices.values()) | {p for _, _, line in raw.edges.values() for p in line}

    instance = normalize(raw)
    host = instance.host
    ends = [(host.position(pipe.u), host.position(pipe.v)) for pipe in host.pipes.values()]

    for u, v in ends:
        assert any(touches(u, p, q) and touches(v, p, q) for p, q in segments)
    for p, q in segments:
        lo, hi = min(p, q), max(p, q)
        pieces = sorted((min(u, v), max(u, v)) for u, v in ends if touches(u, p, q) and touches(v, p, q))
        assert pieces[0][0] == lo
        assert pieces[-1][1] == hi
        assert all(left[1] == right[0] for left, right in zip(pieces, pieces[1:]))
    assert len(host.clusters) <= len(points)
    assert len(host.pipes) <= len(segments) * (len(points) - 1)


def test_forks_on_one_edge_add_clusters():
    """Test that f vertices inside one edge split it with f extra clusters."""
    vertices = {"p": Point.of(0, 0), "q": Point.of(4, 0)}
    edges = {"e0": ("p", "q", (Point.of(0, 0), Point.of(4, 0)))}
    for k in range(1, 4):
        vertices[f"s{k}"] = Point.of(k, 0)
        vertices[f"t{k}"] = Point.of(k, 2)
        edges[f"f{k}"] = (f"s{k}", f"t{k}", (Point.of(k, 0), Point.of(k, 2)))
    raw = RawDrawing(vertices, edges)

    instance = normalize(raw)

    assert len(detect_forks(raw)) == 3
    on_edge = [c for c in instance.host.clusters if instance.host.position(c).y == 0]
    assert len(on_edge) == 2 + 3
    assert sum(1 for e in instance.guest.edges if e.startswith("e0.")) == 4
