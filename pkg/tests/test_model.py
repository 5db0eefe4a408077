"""Tests for core domain types, validation and builders."""

import random
from fractions import Fraction

import pytest

from perturbcross import InstanceParseError, OrderSetError
from perturbcross.model import (
    SAMPLE_HOSTS,
    GuestGraph,
    Pipe,
    PipeOrderSet,
    Point,
    Shape,
    build_instance,
    find_spurs,
    format_rat,
    polygon_positions,
    random_cycle_instance,
    rat,
    validate,
    wound_cycle,
)


def test_rat_parses_exact_values():
    """Test that integers and p/q text become fractions."""
    assert rat("7/3") == Fraction(7, 3)
    assert rat("-2") == Fraction(-2)
    assert rat(5) == Fraction(5)
    assert format_rat(Fraction(7, 3)) == "7/3"
    assert format_rat(Fraction(8, 2)) == "4"


@pytest.mark.parametrize("text", ["1.5", "1e3", "a", "1/0", "", "2/-3"])
def test_rat_rejects_inexact_text(text):
    """Test that floats and junk are refused."""
    with pytest.raises(InstanceParseError, match="Not an exact rational"):
        rat(text)


def test_point_arithmetic():
    """Test point subtraction, addition and scaling stay exact."""
    p = Point.of(1, "1/2")
    q = Point.of(3, 2)

    assert q - p == Point.of(2, "3/2")
    assert p + q == Point.of(4, "5/2")
    assert (q - p).scale(Fraction(1, 2)) == Point.of(1, "3/4")
    assert str(p) == "(1, 1/2)"


def test_pipe_orientation():
    """Test that the tail is the endpoint with the smaller id."""
    pipe = Pipe("p", "zeta", "alpha")

    assert pipe.tail == "alpha"
    assert pipe.head == "zeta"
    assert pipe.other("zeta") == "alpha"


def test_guest_shapes():
    """Test that shape tags are computed from the graph."""
    cycle = GuestGraph(("a", "b", "c"), {"e0": ("a", "b"), "e1": ("b", "c"), "e2": ("c", "a")})
    paths = GuestGraph(("a", "b", "c", "d"), {"e0": ("a", "b"), "e1": ("c", "d")})
    two_cycles = GuestGraph(
        ("a", "b", "c", "d", "e", "f"),
        {"e0": ("a", "b"), "e1": ("b", "c"), "e2": ("c", "a"), "e3": ("d", "e"), "e4": ("e", "f"), "e5": ("f", "d")},
    )

    assert cycle.shape == Shape.CYCLE
    assert paths.shape == Shape.PATHS
    assert two_cycles.shape == Shape.GENERAL


def test_wound_cycle_weights(tri6):
    """Test that a doubly wound hexagon puts two edges in every pipe."""
    assert tri6.weights == {"p0": 2, "p1": 2, "p2": 2}
    assert tri6.order_space_size() == 8
    assert tri6.potential == 3
    assert tri6.guest.shape == Shape.CYCLE


def test_wound_cycle_rejects_bad_sizes():
    """Test that k must be at least 3 and divide n."""
    with pytest.raises(ValueError, match="dividing"):
        wound_cycle(7, 3)
    with pytest.raises(ValueError, match="dividing"):
        wound_cycle(4, 2)


def test_polygon_positions_convex():
    """Test that polygon corners lie on a parabola."""
    assert polygon_positions(4) == [Point.of(i, i * i) for i in range(4)]


def test_validate_clean_instance(tri6):
    """Test that a wound cycle is admissible and spur-free."""
    report = validate(tri6)

    assert report.admissible
    assert report.spurs == ()
    assert report.forks == ()


def test_validate_reports_wrong_pipe(tri6):
    """Test that an edge mapped to a pipe not joining its ends is reported."""
    edge_map = dict(tri6.map.edge_map)
    edge_map["e0"] = "p1"
    broken = build_instance(
        {c.id: c.position for c in tri6.host.clusters.values()},
        tri6.host.pipes.values(),
        tri6.map.vertex_map,
        tri6.guest.edges,
        edge_map,
    )

    report = validate(broken)

    assert not report.admissible
    assert any("e0" in v for v in report.violations)


def test_validate_reports_pipe_through_cluster():
    """Test that a pipe drawn through another cluster is a violation."""
    positions = {"a": Point.of(0, 0), "b": Point.of(1, 0), "c": Point.of(2, 0), "d": Point.of(1, 2)}
    pipes = [("ac", "a", "c"), ("cd", "c", "d"), ("da", "d", "a")]
    vertex_map = {"g0": "a", "g1": "c", "g2": "d", "g3": "b"}
    edges = {"e0": ("g0", "g1"), "e1": ("g1", "g2"), "e2": ("g2", "g0")}
    instance = build_instance(positions, pipes, vertex_map, edges)

    report = validate(instance)

    assert any("passes through cluster 'b'" in v for v in report.violations)


def test_find_spurs_detects_turn():
    """Test that a vertex whose edges share a pipe is a spur."""
    positions = {"a": Point.of(0, 0), "b": Point.of(1, 0)}
    instance = build_instance(
        positions,
        [("ab", "a", "b")],
        {"g0": "a", "g1": "b", "g2": "a"},
        {"e0": ("g0", "g1"), "e1": ("g1", "g2")},
    )

    assert find_spurs(instance) == ["g1"]
    assert validate(instance).spurs == ("g1",)


def test_order_set_check(tri6):
    """Test that order sets must permute each preimage exactly."""
    identity = PipeOrderSet.identity(tri6)
    identity.check(tri6)

    with pytest.raises(OrderSetError, match="not a permutation"):
        PipeOrderSet({**identity.orders, "p0": ("e0", "e1")}).check(tri6)
    with pytest.raises(OrderSetError, match="No order"):
        PipeOrderSet({"p0": identity["p0"]}).check(tri6)
    with pytest.raises(OrderSetError, match="unknown pipes"):
        PipeOrderSet({**identity.orders, "zz": ()}).check(tri6)


def test_mirrored_reverses_orders(tri6):
    """Test that mirroring reverses each order."""
    identity = PipeOrderSet.identity(tri6)

    assert identity.mirrored()["p0"] == tuple(reversed(identity["p0"]))


def test_random_cycle_instances_are_spur_free(rng):
    """Test that random walks avoid reversals and respect the budget."""
    for _ in range(30):
        instance = random_cycle_instance(rng, budget=10_000)
        report = validate(instance)

        assert report.admissible
        assert report.spurs == ()
        assert instance.guest.shape == Shape.CYCLE
        assert instance.order_space_size() <= 10_000


def test_random_cycle_instance_on_named_host():
    """Test that a host can be chosen by name."""
    instance = random_cycle_instance(random.Random(3), "wheel", length=6)

    assert set(instance.host.clusters) == set(SAMPLE_HOSTS["wheel"][0])
    assert len(instance.guest.edges) == 6
