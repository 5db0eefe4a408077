"""Tests for the crossing count of a pipe order set."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perturbcross import OrderSetError
from perturbcross.evaluate import (
    Chord,
    DiskModel,
    check_certificate,
    count_interleavings,
    count_interleavings_naive,
    disk_chords,
    evaluate,
    interleavings_between,
)
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import PipeOrderSet, random_cycle_instance


@st.composite
def chord_sets(draw):
    """Perfect matchings of 2n slots, as chords."""
    n = draw(st.integers(min_value=0, max_value=8))
    slots = draw(st.permutations(list(range(2 * n))))
    return [Chord(f"v{i}", min(slots[2 * i], slots[2 * i + 1]), max(slots[2 * i], slots[2 * i + 1])) for i in range(n)]


@settings(max_examples=300, deadline=None)
@given(chord_sets())
def test_fast_count_matches_reference(chords):
    """Test that the sorted-list count agrees with the quadratic count."""
    assert count_interleavings(chords) == count_interleavings_naive(chords)


def test_nested_and_crossing_chords():
    """Test the two basic chord configurations."""
    assert count_interleavings([Chord("a", 0, 3), Chord("b", 1, 2)]) == 0
    assert count_interleavings([Chord("a", 0, 2), Chord("b", 1, 3)]) == 1
    assert count_interleavings([Chord("a", 0, 3), Chord("b", 1, 4), Chord("c", 2, 5)]) == 3


def test_interleavings_between_groups():
    """Test that only pairs across the two groups are counted."""
    left = [Chord("a", 0, 2), Chord("b", 1, 3)]
    right = [Chord("c", 4, 6), Chord("d", 5, 7)]

    assert interleavings_between(left, right) == 0
    assert interleavings_between(left, [Chord("e", 2, 5)]) == 0
    assert interleavings_between(left[:1], left[1:]) == 1


def test_identity_cycle_has_no_crossings(identity_c3):
    """Test that a triangle drawn on itself evaluates to zero."""
    result = evaluate(identity_c3, PipeOrderSet.identity(identity_c3))

    assert result.total == 0
    assert result.disk_total == 0


def test_tri6_orders(tri6):
    """Test that every order set of the doubled hexagon has one or three crossings."""
    pipes = sorted(tri6.host.pipes)
    totals = []
    for picks in itertools.product(*(itertools.permutations(tri6.pipe_preimage[p]) for p in pipes)):
        orders = PipeOrderSet(dict(zip(pipes, picks)))
        totals.append(evaluate(tri6, orders).total)

    assert min(totals) == 1
    assert set(totals) <= {1, 3}


def test_evaluate_per_cluster_breakdown(tri6):
    """Test that the breakdown covers every cluster and sums to the disk total."""
    result = evaluate(tri6, PipeOrderSet.identity(tri6))

    assert set(result.per_cluster) == {"c0", "c1", "c2"}
    assert sum(result.per_cluster.values()) == result.total - result.cr2


def test_evaluate_random_orders_bounded_below():
    """Test that random order sets never evaluate below cr2 and reuse a given ledger."""
    rng = random.Random(5)
    for _ in range(25):
        instance = random_cycle_instance(rng, budget=5_000)
        orders = PipeOrderSet(
            {p: tuple(rng.sample(es, len(es))) for p, es in instance.pipe_preimage.items()}
        )
        ledger = crossing_ledger(instance)

        result = evaluate(instance, orders, ledger=ledger)

        assert result.total >= ledger.cr2
        assert result == evaluate(instance, orders)


def test_evaluate_rejects_bad_orders(tri6):
    """Test that orders must match the pipe preimages."""
    with pytest.raises(OrderSetError):
        evaluate(tri6, PipeOrderSet({"p0": ("e0", "e3")}))


def test_check_certificate(tri6):
    """Test that certificates compare the count against k."""
    orders = PipeOrderSet.identity(tri6)
    total = evaluate(tri6, orders).total

    assert check_certificate(tri6, orders, total)
    assert not check_certificate(tri6, orders, total - 1)


def test_disk_chords_match_model(tri6):
    """Test that the one-off helper agrees with the disk model."""
    rotations = rotation_at(tri6.host)
    orders = PipeOrderSet.identity(tri6)
    model = DiskModel(tri6, rotations)

    for cluster in tri6.host.clusters:
        assert disk_chords(tri6, orders, rotations, cluster) == model.chords_at(cluster, orders.orders)
        assert len(model.chords_at(cluster, orders.orders)) == 2


def test_mirroring_orders_and_rotations_keeps_total():
    """Test that reflecting every order and every rotation leaves the count unchanged."""
    rng = random.Random(17)
    for _ in range(40):
        instance = random_cycle_instance(rng, budget=50_000)
        orders = PipeOrderSet(
            {p: tuple(rng.sample(es, len(es))) for p, es in instance.pipe_preimage.items()}
        )
        rotations = rotation_at(instance.host)
        reflected = {c: tuple(reversed(r)) for c, r in rotations.items()}
        ledger = crossing_ledger(instance)

        direct = evaluate(instance, orders, rotations, ledger)
        mirrored = evaluate(instance, orders.mirrored(), reflected, ledger)

        assert mirrored.total == direct.total
        assert mirrored.per_cluster == direct.per_cluster
