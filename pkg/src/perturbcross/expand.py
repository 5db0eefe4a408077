"""Cluster and pipe expansions, done combinatorially.

Both operations replace a disk (around a cluster) or a narrow ellipse
(around a pipe) by a cycle of new boundary clusters joined by chord pipes.
No coordinates are invented: boundary clusters are virtual, their rotations
follow from the boundary order, and two chord pipes cross exactly when
their boundary endpoints interleave.

This module provides:
- ``ExpansionState``: the mutable working copy the solver rewrites
- ``cluster_expansion`` and ``pipe_expansion`` on immutable instances
- ``SafetyFlags`` with ``recompute_safety`` and ``update_safety``
- ``weights_partition``: splitting one pipe's preimage into chord groups
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from perturbcross.exceptions import (
    GuestNotCycleError,
    InstanceValidationError,
    SolverInvariantError,
    SpurPresentError,
    UnsafePipeError,
)
from perturbcross.model import (
    Cluster,
    CrossingLedger,
    GuestGraph,
    HostGraph,
    Instance,
    Pipe,
    Point,
    RotationSystem,
    SimplicialMap,
    pair_key,
)

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)

# insertion-ordered set of ids
IdSet = dict[str, None]


@dataclass
class WeightPartition(Generic[K]):
    """Result of ``weights_partition``.

    Attributes:
        groups: Group key mapped to its members
        weights: Group key mapped to its size
        charged: Number of members that had to be moved into a new set
        reused: Key of the group that kept the original set, if any
    """

    groups: dict[K, IdSet]
    weights: dict[K, int]
    charged: int
    reused: K | None = None


def weights_partition(
    members: IdSet, groups: Mapping[K, Sequence[str]], *, charging: bool = False
) -> WeightPartition[K]:
    """Split the preimage of one pipe into chord groups.

    Without charging every group gets a fresh set and every member is
    charged. With charging the largest group keeps ``members`` itself (the
    others are removed from it), so only members leaving for groups no
    larger than the remainder are charged.

    Args:
        members: The pipe's preimage; mutated when ``charging`` is set
        groups: Group key mapped to the members it receives
        charging: Reuse the original set for the largest group

    Returns:
        WeightPartition with the new sets and the charged work

    Example:
        >>> split = weights_partition(dict.fromkeys("abcd"), {1: "abc", 2: "d"}, charging=True)
        >>> split.charged, split.weights
        (1, {1: 3, 2: 1})
    """
    if not charging:
        fresh = {key: dict.fromkeys(group) for key, group in groups.items()}
        return WeightPartition(fresh, {k: len(s) for k, s in fresh.items()}, len(members))

    if not groups:
        return WeightPartition({}, {}, 0)
    keys = list(groups)
    largest = max(keys, key=lambda k: len(groups[k]))
    result: dict[K, IdSet] = {}
    charged = 0
    for key in keys:
        if key == largest:
            continue
        moved = dict.fromkeys(groups[key])
        for member in moved:
            del members[member]
        result[key] = moved
        charged += len(moved)
    result[largest] = members
    return WeightPartition(result, {k: len(s) for k, s in result.items()}, charged, largest)


def _interleave(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (i, j), (k, l) = a, b
    return i < k < j < l or k < i < l < j


class ExpansionState:
    """Mutable instance, crossing ledger and rotation system.

    Vertex and pipe memberships are kept as insertion-ordered dicts so
    that fresh ids and rotations are reproducible across runs.
    """

    def __init__(self, *, charging: bool = False) -> None:
        self.vertex_cluster: dict[str, str] = {}
        self.edges: dict[str, tuple[str, str]] = {}
        self.incident: dict[str, list[str]] = {}
        self.edge_pipe: dict[str, str] = {}
        self.cluster_vertices: dict[str, IdSet] = {}
        self.pipe_edges: dict[str, IdSet] = {}
        self.pipe_ends: dict[str, tuple[str, str]] = {}
        self.rotation: dict[str, list[str]] = {}
        self.positions: dict[str, Point | None] = {}
        self.polylines: dict[str, tuple[Point, ...] | None] = {}
        self.crossings: dict[str, Counter[str]] = {}
        self.cr2 = 0
        self.charging = charging
        self.charged_work = 0
        self._serial = 0

    @classmethod
    def from_instance(
        cls,
        instance: Instance,
        ledger: CrossingLedger,
        rotations: RotationSystem,
        *,
        charging: bool = False,
    ) -> ExpansionState:
        """Load an instance together with its ledger and rotation system."""
        state = cls(charging=charging)
        host, guest, lam = instance.host, instance.guest, instance.map
        for cid, cluster in host.clusters.items():
            incident = host.incidence.get(cid, ())
            rotation = list(rotations.get(cid, ()))
            if sorted(rotation) != sorted(incident):
                raise InstanceValidationError(f"Rotation at '{cid}' does not list exactly its incident pipes")
            state.rotation[cid] = rotation
            state.positions[cid] = cluster.position
            state.cluster_vertices[cid] = {}
        for pid, pipe in host.pipes.items():
            state.pipe_ends[pid] = (pipe.u, pipe.v)
            state.polylines[pid] = pipe.polyline
            state.pipe_edges[pid] = {}
            state.crossings[pid] = Counter()
        for vertex in guest.vertices:
            cluster = lam.vertex_map[vertex]
            state.vertex_cluster[vertex] = cluster
            state.cluster_vertices[cluster][vertex] = None
            state.incident[vertex] = list(guest.incidence.get(vertex, ()))
        for edge_id, ends in guest.edges.items():
            pid = lam.edge_map[edge_id]
            state.edges[edge_id] = ends
            state.edge_pipe[edge_id] = pid
            state.pipe_edges[pid][edge_id] = None
        for (a, b), mult in ledger.crossing_pairs.items():
            state.crossings[a][b] += mult
            state.crossings[b][a] += mult
        state.cr2 = ledger.cr2
        return state

    # -- queries ----------------------------------------------------------

    @property
    def potential(self) -> int:
        """Φ = |E(G)| − |E(H)|."""
        return len(self.edges) - len(self.pipe_ends)

    def weight(self, pipe: str) -> int:
        return len(self.pipe_edges[pipe])

    def degree(self, cluster: str) -> int:
        return len(self.rotation[cluster])

    def other_end(self, pipe: str, cluster: str) -> str:
        u, v = self.pipe_ends[pipe]
        return v if cluster == u else u

    def is_base(self, cluster: str, pipe: str) -> bool:
        """Every vertex at ``cluster`` has an edge on ``pipe``."""
        return all(
            any(self.edge_pipe[e] == pipe for e in self.incident[vertex])
            for vertex in self.cluster_vertices[cluster]
        )

    def is_safe(self, pipe: str) -> bool:
        u, v = self.pipe_ends[pipe]
        return self.is_base(u, pipe) and self.is_base(v, pipe)

    def is_expandable(self, pipe: str) -> bool:
        """Safe, with an endpoint of degree at least 3."""
        if pipe not in self.pipe_ends:
            return False
        u, v = self.pipe_ends[pipe]
        return (self.degree(u) >= 3 or self.degree(v) >= 3) and self.is_safe(pipe)

    def is_spur(self, vertex: str) -> bool:
        pipes = [self.edge_pipe[e] for e in self.incident[vertex]]
        return len(pipes) != len(set(pipes))

    def is_cycle_host(self) -> bool:
        """True iff the host is one cycle."""
        if not self.rotation or any(len(r) != 2 for r in self.rotation.values()):
            return False
        start = next(iter(self.rotation))
        seen = {start}
        current, previous = start, self.rotation[start][0]
        while True:
            pipe = next(p for p in self.rotation[current] if p != previous)
            current, previous = self.other_end(pipe, current), pipe
            if current == start:
                return len(seen) == len(self.rotation)
            seen.add(current)

    # -- fresh ids --------------------------------------------------------

    def _fresh(self, prefix: str, taken: Mapping[str, object]) -> str:
        while True:
            self._serial += 1
            candidate = f"{prefix}{self._serial}"
            if candidate not in taken:
                return candidate

    def _new_cluster(self) -> str:
        cid = self._fresh("y", self.rotation)
        self.rotation[cid] = []
        self.cluster_vertices[cid] = {}
        self.positions[cid] = None
        return cid

    def _new_pipe(self, u: str, v: str) -> str:
        pid = self._fresh("q", self.pipe_ends)
        self.pipe_ends[pid] = (u, v)
        self.pipe_edges[pid] = {}
        self.polylines[pid] = None
        self.crossings[pid] = Counter()
        return pid

    def _new_vertex(self, cluster: str) -> str:
        vid = self._fresh("x", self.vertex_cluster)
        self.vertex_cluster[vid] = cluster
        self.cluster_vertices[cluster][vid] = None
        self.incident[vid] = []
        return vid

    def _new_edge(self, a: str, b: str) -> str:
        eid = self._fresh("f", self.edges)
        self.edges[eid] = (a, b)
        self.incident[a].append(eid)
        self.incident[b].append(eid)
        return eid

    # -- elementary edits -------------------------------------------------

    def _move_vertex(self, vertex: str, cluster: str) -> None:
        old = self.vertex_cluster[vertex]
        self.cluster_vertices[old].pop(vertex, None)
        self.vertex_cluster[vertex] = cluster
        self.cluster_vertices[cluster][vertex] = None

    def _rewire(self, edge: str, old: str, new: str) -> None:
        a, b = self.edges[edge]
        self.edges[edge] = (new, b) if a == old else (a, new)
        self.incident[old].remove(edge)
        self.incident[new].append(edge)

    def _reattach(self, pipe: str, old: str, new: str) -> None:
        u, v = self.pipe_ends[pipe]
        self.pipe_ends[pipe] = (new, v) if u == old else (u, new)
        self.polylines[pipe] = None
        self.rotation[new].append(pipe)

    def _add_crossing(self, p: str, q: str, mult: int) -> None:
        self.crossings[p][q] += mult
        self.crossings[q][p] += mult
        self.cr2 += mult * self.weight(p) * self.weight(q)

    def _remove_crossings(self, pipe: str) -> Counter[str]:
        removed = self.crossings.pop(pipe)
        for other, mult in removed.items():
            del self.crossings[other][pipe]
            self.cr2 -= mult * self.weight(pipe) * self.weight(other)
        return removed

    def _delete_cluster(self, cluster: str) -> None:
        del self.rotation[cluster]
        del self.cluster_vertices[cluster]
        del self.positions[cluster]

    def _drop_pipe(self, pipe: str) -> None:
        self._remove_crossings(pipe)
        for cluster in set(self.pipe_ends.pop(pipe)):
            if cluster in self.rotation:
                self.rotation[cluster].remove(pipe)
        del self.pipe_edges[pipe]
        del self.polylines[pipe]

    def prune(self, clusters: Iterable[str]) -> None:
        """Drop zero-weight pipes at ``clusters`` and every cluster left empty."""
        pending = list(clusters)
        while pending:
            cluster = pending.pop()
            if cluster not in self.rotation:
                continue
            for pipe in list(self.rotation[cluster]):
                if not self.pipe_edges[pipe]:
                    pending.append(self.other_end(pipe, cluster))
                    self._drop_pipe(pipe)
            if not self.cluster_vertices[cluster] and not self.rotation[cluster]:
                self._delete_cluster(cluster)

    def _install_chords(self, boundary: list[str], chords: dict[tuple[int, int], str]) -> None:
        """Record chord crossings and set rotations on a boundary cycle.

        ``chords`` maps boundary index pairs (i < j) to chord pipes. Each
        boundary cluster already holds its outer stub in its rotation.
        """
        keys = sorted(chords)
        for index, first in enumerate(keys):
            for second in keys[index + 1:]:
                if _interleave(first, second):
                    self._add_crossing(chords[first], chords[second], 1)
        size = len(boundary)
        for i, cluster in enumerate(boundary):
            for step in range(1, size):
                j = (i + step) % size
                pipe = chords.get((min(i, j), max(i, j)))
                if pipe is not None:
                    self.rotation[cluster].append(pipe)

    # -- operations -------------------------------------------------------

    def cluster_expansion(self, cluster: str) -> list[str]:
        """Replace a cluster by a boundary cycle of virtual clusters.

        Each guest vertex at the cluster keeps its first edge, a new vertex
        takes its second edge, and a new chord edge joins the two.

        Returns:
            Surviving boundary clusters in ccw order

        Raises:
            InstanceValidationError: If the cluster is unknown or carries a
                vertex of degree above 2
        """
        if cluster not in self.rotation:
            raise InstanceValidationError(f"Unknown cluster '{cluster}'")
        stubs = list(self.rotation[cluster])
        boundary = [self._new_cluster() for _ in stubs]
        slot_of = {pipe: i for i, pipe in enumerate(stubs)}
        for pipe, target in zip(stubs, boundary):
            self._reattach(pipe, cluster, target)

        groups: dict[tuple[int, int], list[str]] = defaultdict(list)
        for vertex in list(self.cluster_vertices[cluster]):
            incident = self.incident[vertex]
            if len(incident) > 2:
                raise InstanceValidationError(f"Guest vertex '{vertex}' has degree {len(incident)}")
            if not incident:
                del self.cluster_vertices[cluster][vertex]
                del self.vertex_cluster[vertex]
                del self.incident[vertex]
                continue
            first, *rest = incident
            i = slot_of[self.edge_pipe[first]]
            self._move_vertex(vertex, boundary[i])
            if not rest:
                continue
            j = slot_of[self.edge_pipe[rest[0]]]
            if i == j:
                continue
            split = self._new_vertex(boundary[j])
            self._rewire(rest[0], vertex, split)
            groups[(min(i, j), max(i, j))].append(self._new_edge(vertex, split))

        chords: dict[tuple[int, int], str] = {}
        for (i, j), members in sorted(groups.items()):
            pipe = self._new_pipe(boundary[i], boundary[j])
            for edge in members:
                self.edge_pipe[edge] = pipe
                self.pipe_edges[pipe][edge] = None
            chords[(i, j)] = pipe
        self._delete_cluster(cluster)
        self._install_chords(boundary, chords)
        self.prune(boundary)
        logger.debug(
            "cluster expansion of %s: %d boundary clusters, %d chord pipes", cluster, len(boundary), len(chords)
        )
        return [c for c in boundary if c in self.rotation]

    def pipe_expansion(self, pipe: str) -> list[str]:
        """Replace a safe pipe and its two ends by a boundary cycle.

        Every edge of the pipe becomes a chord between the boundary
        clusters of its outer neighbours' pipes; the guest keeps its size.

        Returns:
            Surviving boundary clusters in ccw order

        Raises:
            SpurPresentError: If a vertex at either end is a spur
            UnsafePipeError: If the pipe is not safe
            GuestNotCycleError: If a vertex at either end does not have degree 2
        """
        if pipe not in self.pipe_ends:
            raise InstanceValidationError(f"Unknown pipe '{pipe}'")
        u, v = self.pipe_ends[pipe]
        ends_vertices = [*self.cluster_vertices[u], *self.cluster_vertices[v]]
        spurs = sorted(b for b in ends_vertices if self.is_spur(b))
        if spurs:
            raise SpurPresentError(spurs)
        if not self.is_safe(pipe):
            raise UnsafePipeError(f"Pipe '{pipe}' is not safe")
        for vertex in ends_vertices:
            if len(self.incident[vertex]) != 2:
                raise GuestNotCycleError(f"Vertex '{vertex}' at an end of '{pipe}' does not have degree 2")

        outer: list[tuple[str, str]] = []
        for end in (u, v):
            rotation = self.rotation[end]
            at = rotation.index(pipe)
            outer.extend((q, end) for q in rotation[at + 1:] + rotation[:at])
        inherited = self._remove_crossings(pipe)
        members = self.pipe_edges.pop(pipe)
        del self.pipe_ends[pipe]
        del self.polylines[pipe]

        boundary = [self._new_cluster() for _ in outer]
        slot_of = {q: i for i, (q, _) in enumerate(outer)}
        for (q, end), target in zip(outer, boundary):
            self._reattach(q, end, target)

        groups: dict[tuple[int, int], list[str]] = defaultdict(list)
        moves: list[tuple[str, int]] = []
        for edge in members:
            a, b = self.edges[edge]
            if self.vertex_cluster[a] != u:
                a, b = b, a
            i = slot_of[self.edge_pipe[self._next_edge(a, edge)]]
            j = slot_of[self.edge_pipe[self._next_edge(b, edge)]]
            groups[(i, j)].append(edge)
            moves += [(a, i), (b, j)]
        for vertex, index in moves:
            self._move_vertex(vertex, boundary[index])
        for end in (u, v):
            if self.cluster_vertices[end]:
                raise SolverInvariantError(f"Cluster '{end}' kept vertices after expanding '{pipe}'")
            self._delete_cluster(end)

        split = weights_partition(members, groups, charging=self.charging)
        self.charged_work += split.charged
        chords: dict[tuple[int, int], str] = {}
        for key in sorted(split.groups):
            i, j = key
            if key == split.reused:
                chord = pipe
                self.pipe_ends[chord] = (boundary[i], boundary[j])
                self.polylines[chord] = None
                self.crossings[chord] = Counter()
            else:
                chord = self._new_pipe(boundary[i], boundary[j])
                for edge in split.groups[key]:
                    self.edge_pipe[edge] = chord
            self.pipe_edges[chord] = split.groups[key]
            chords[key] = chord
        for chord in chords.values():
            for other, mult in inherited.items():
                self._add_crossing(chord, other, mult)
        self._install_chords(boundary, chords)
        self.prune(boundary)
        logger.debug(
            "pipe expansion of %s: %d boundary clusters, %d chord pipes, charged %d",
            pipe, len(boundary), len(chords), split.charged,
        )
        return [c for c in boundary if c in self.rotation]

    def _next_edge(self, vertex: str, edge: str) -> str:
        first, second = self.incident[vertex]
        return second if first == edge else first

    # -- export -----------------------------------------------------------

    def export(self) -> tuple[Instance, CrossingLedger, RotationSystem]:
        """Freeze the state into (instance, ledger, rotations)."""
        clusters = {c: Cluster(c, self.positions[c]) for c in self.rotation}
        pipes = {p: Pipe(p, u, v, self.polylines[p]) for p, (u, v) in self.pipe_ends.items()}
        guest = GuestGraph(tuple(self.vertex_cluster), dict(self.edges))
        instance = Instance(guest, HostGraph(clusters, pipes), SimplicialMap(dict(self.vertex_cluster), dict(self.edge_pipe)))
        pairs: Counter[tuple[str, str]] = Counter()
        for p, partners in self.crossings.items():
            for q, mult in partners.items():
                if p < q:
                    pairs[pair_key(p, q)] += mult
        ledger = CrossingLedger.build({p: self.weight(p) for p in self.pipe_ends}, pairs)
        rotations = {c: tuple(r) for c, r in self.rotation.items()}
        return instance, ledger, rotations


def cluster_expansion(
    instance: Instance, ledger: CrossingLedger, rotations: RotationSystem, cluster: str
) -> tuple[Instance, CrossingLedger, RotationSystem]:
    """Expand one cluster of an instance into a boundary cycle.

    Args:
        instance: Instance with guest degrees at most 2
        ledger: Its crossing ledger
        rotations: Its rotation system
        cluster: Cluster to expand

    Returns:
        (instance′, ledger′, rotations′) with the same crossing number

    Raises:
        InstanceValidationError: If ``cluster`` is unknown
    """
    state = ExpansionState.from_instance(instance, ledger, rotations)
    state.cluster_expansion(cluster)
    return state.export()


def pipe_expansion(
    instance: Instance, ledger: CrossingLedger, rotations: RotationSystem, pipe: str
) -> tuple[Instance, CrossingLedger, RotationSystem]:
    """Expand one safe pipe of a spur-free instance.

    Raises:
        UnsafePipeError: If ``pipe`` is not safe
        SpurPresentError: If a vertex at an end of ``pipe`` is a spur
    """
    state = ExpansionState.from_instance(instance, ledger, rotations)
    state.pipe_expansion(pipe)
    return state.export()


@dataclass(frozen=True)
class SafetyFlags:
    """Base flags per (cluster, pipe) and safe flags per pipe."""

    base: dict[tuple[str, str], bool] = field(default_factory=dict)
    safe: dict[str, bool] = field(default_factory=dict)


def _is_base(instance: Instance, cluster: str, pipe: str) -> bool:
    edge_map = instance.map.edge_map
    incidence = instance.guest.incidence
    return all(
        any(edge_map[e] == pipe for e in incidence.get(vertex, ()))
        for vertex in instance.cluster_preimage.get(cluster, ())
    )


def _flag_pipes(instance: Instance, pipes: Iterable[str], flags: SafetyFlags) -> None:
    for pid in pipes:
        pipe = instance.host.pipes[pid]
        ends = [_is_base(instance, c, pid) for c in (pipe.u, pipe.v)]
        flags.base[(pipe.u, pid)], flags.base[(pipe.v, pid)] = ends
        flags.safe[pid] = all(ends)


def recompute_safety(instance: Instance) -> SafetyFlags:
    """Base and safe flags of every pipe, from the definitions.

    Example:
        >>> recompute_safety(wound_cycle(6, 3)).safe["p0"]
        True
    """
    flags = SafetyFlags()
    _flag_pipes(instance, instance.host.pipes, flags)
    return flags


def update_safety(flags: SafetyFlags, instance: Instance, touched: Iterable[str]) -> SafetyFlags:
    """Refresh flags after an operation that changed the clusters in ``touched``.

    Entries for clusters and pipes no longer present are dropped; only pipes
    incident to a touched cluster are recomputed.
    """
    host = instance.host
    updated = SafetyFlags(
        {k: f for k, f in flags.base.items() if k[0] in host.clusters and k[1] in host.pipes},
        {p: f for p, f in flags.safe.items() if p in host.pipes},
    )
    pipes = {p for c in touched if c in host.clusters for p in host.incidence.get(c, ())}
    _flag_pipes(instance, sorted(pipes), updated)
    return updated
