"""Tests for cluster and pipe expansions."""

import random

import pytest

from perturbcross import BudgetExceededError, SpurPresentError, UnsafePipeError
from perturbcross.expand import (
    ExpansionState,
    cluster_expansion,
    pipe_expansion,
    recompute_safety,
    update_safety,
    weights_partition,
)
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import Point, Shape, build_instance, random_cycle_instance, sample_host
from perturbcross.normalize import prune
from perturbcross.oracle import oracle_invariance_check


def _on_host(name, walk):
    """Closed walk on a sample host as an instance."""
    template = sample_host(name)
    vertex_map = {f"g{i}": c for i, c in enumerate(walk)}
    edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % len(walk)}") for i in range(len(walk))}
    return prune(
        build_instance(
            {c.id: c.position for c in template.host.clusters.values()},
            template.host.pipes.values(),
            vertex_map,
            edges,
        )
    )


def _triangle(walk):
    positions = {"a": Point.of(0, 0), "b": Point.of(3, 0), "c": Point.of(1, 2)}
    pipes = [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")]
    vertex_map = {f"g{i}": c for i, c in enumerate(walk)}
    edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % len(walk)}") for i in range(len(walk))}
    return build_instance(positions, pipes, vertex_map, edges)


def _snapshot(instance):
    return instance, crossing_ledger(instance), rotation_at(instance.host)


def test_weights_partition_naive_charges_everything():
    """Test that without charging every member is charged."""
    split = weights_partition(dict.fromkeys("abcd"), {1: "abc", 2: "d"})

    assert split.charged == 4
    assert split.weights == {1: 3, 2: 1}
    assert split.reused is None


@pytest.mark.parametrize(
    ("groups", "charged"),
    [
        ({1: "abc", 2: "d"}, 1),
        ({1: "a", 2: "b"}, 1),
        ({1: "abcd"}, 0),
        ({1: "ab", 2: "c", 3: "d"}, 2),
    ],
)
def test_weights_partition_charging(groups, charged):
    """Test that charging only counts members leaving the largest group."""
    members = dict.fromkeys("".join(groups.values()))

    split = weights_partition(members, groups, charging=True)

    assert split.charged == charged
    assert split.groups[split.reused] is members
    assert {k: "".join(v) for k, v in split.groups.items()} == groups


def test_cluster_expansion_on_triangle(tri6):
    """Test that expanding one corner of the doubled hexagon adds one chord pipe."""
    instance, ledger, rotations = cluster_expansion(*_snapshot(tri6), "c0")

    assert "c0" not in instance.host.clusters
    assert len(instance.host.pipes) == 4
    assert len(instance.guest.edges) == 8
    assert sorted(instance.weights.values()) == [2, 2, 2, 2]
    assert instance.guest.shape == Shape.CYCLE
    assert ledger.cr2 == 0
    assert all(len(r) == 2 for r in rotations.values())


def test_cluster_expansion_preserves_oracle_value(tri6):
    """Test that the crossing number survives a cluster expansion."""
    assert oracle_invariance_check(tri6, cluster_expansion(*_snapshot(tri6), "c1"))


def test_each_expansion_preserves_oracle_value_on_random_corpus():
    """Test oracle invariance after every single cluster and pipe expansion."""
    rng = random.Random(7)
    checked = 0

    def step(state, expand, target):
        nonlocal checked
        before = state.export()
        expand(target)
        try:
            assert oracle_invariance_check(before, state.export(), budget=50_000), target
        except BudgetExceededError:
            return
        checked += 1

    for _ in range(200):
        if checked >= 100:
            break
        instance = prune(random_cycle_instance(rng, budget=24))
        state = ExpansionState.from_instance(*_snapshot(instance))
        for cluster in sorted(instance.host.clusters):
            step(state, state.cluster_expansion, cluster)
        while (pipe := next((p for p in sorted(state.pipe_ends) if state.is_expandable(p)), None)) is not None:
            step(state, state.pipe_expansion, pipe)

    assert checked >= 100


def test_pipe_expansion_on_safe_pipe():
    """Test that expanding a safe pipe keeps the guest and the crossing number."""
    instance = _on_host("wheel", ["a", "b", "c", "a", "m", "c"])
    before = _snapshot(instance)

    after = pipe_expansion(*before, "ca")

    assert "ca" not in after[0].host.pipes
    assert len(after[0].guest.edges) == len(instance.guest.edges)
    assert after[0].potential < instance.potential
    assert oracle_invariance_check(before, after)


def test_pipe_expansion_rejects_unsafe_pipe():
    """Test that a pipe with a non-base end cannot be expanded."""
    instance = _on_host("wheel", ["a", "b", "c", "a", "m", "c"])

    with pytest.raises(UnsafePipeError, match="'ab'"):
        pipe_expansion(*_snapshot(instance), "ab")


def test_pipe_expansion_rejects_spurs():
    """Test that spurs at the pipe ends are refused."""
    instance = _triangle(["a", "b", "a", "c", "b", "c"])

    with pytest.raises(SpurPresentError) as info:
        pipe_expansion(*_snapshot(instance), "ab")

    assert "g1" in info.value.vertices


def test_safety_flags():
    """Test base and safe flags, and their refresh after an expansion."""
    instance = _on_host("wheel", ["a", "b", "c", "a", "m", "c"])

    flags = recompute_safety(instance)

    assert flags.safe["ca"]
    assert not flags.safe["ab"]
    assert flags.base[("b", "ab")]
    assert not flags.base[("a", "ab")]

    expanded, _, _ = cluster_expansion(*_snapshot(instance), "b")
    refreshed = update_safety(flags, expanded, [c for c in expanded.host.clusters if c.startswith("y")])

    assert refreshed.safe == recompute_safety(expanded).safe
    assert refreshed.base == recompute_safety(expanded).base


def test_charging_keeps_crossing_number():
    """Test that weight charging changes bookkeeping, not the result."""
    instance = _on_host("wheel", ["a", "b", "c", "a", "m", "c"])
    plain = ExpansionState.from_instance(*_snapshot(instance))
    charged = ExpansionState.from_instance(*_snapshot(instance), charging=True)

    plain.pipe_expansion("ca")
    charged.pipe_expansion("ca")

    assert plain.cr2 == charged.cr2
    assert plain.potential == charged.potential
    assert charged.charged_work <= plain.charged_work
    assert "ca" in charged.pipe_ends
