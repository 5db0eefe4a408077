"""Tests that the solver-against-oracle comparison notices a broken disk or expansion rule."""

from perturbcross import PerturbCrossError
from perturbcross.evaluate import DiskModel
from perturbcross.expand import ExpansionState
from perturbcross.model import build_instance, sample_host
from perturbcross.normalize import prune
from perturbcross.oracle import oracle
from perturbcross.solve import solve


def _figure_eight():
    """Two triangles of the bowtie host traversed as one crossing loop through m."""
    template = sample_host("bowtie")
    walk = ["a", "m", "d", "c", "m", "b"]
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


def _solved(instance):
    try:
        return solve(instance)[0]
    except PerturbCrossError:
        return None


def _slots_ignoring_head(self, cluster, orders):
    slot = {}
    position = 0
    for pipe, _ in self.sides[cluster]:
        for edge in orders[pipe]:
            slot[edge] = position
            position += 1
    return slot


def test_sound_rules_agree(tri6):
    """Test that solver and oracle agree on both instances used below."""
    figure_eight = _figure_eight()

    assert solve(tri6)[0] == oracle(tri6).value == 1
    assert solve(figure_eight)[0] == oracle(figure_eight).value == 1


def test_head_slots_read_forward_is_caught(tri6, monkeypatch):
    """Test that reading pipe orders unreversed at the head breaks agreement."""
    monkeypatch.setattr(DiskModel, "slots_at", _slots_ignoring_head)

    assert oracle(tri6).value == 0
    assert _solved(tri6) != oracle(tri6).value


def test_shuffled_boundary_rotation_is_caught(monkeypatch):
    """Test that expanding a cluster with two stubs swapped breaks agreement."""
    original = ExpansionState.cluster_expansion

    def swapped(self, cluster):
        rotation = list(self.rotation[cluster])
        if len(rotation) >= 2:
            rotation[0], rotation[1] = rotation[1], rotation[0]
            self.rotation[cluster] = type(self.rotation[cluster])(rotation)
        return original(self, cluster)

    monkeypatch.setattr(ExpansionState, "cluster_expansion", swapped)
    instance = _figure_eight()

    assert _solved(instance) != oracle(instance).value

