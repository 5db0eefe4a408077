"""Crossing count of the perturbation described by a pipe order set.

Around each cluster disk the guest edges end in slots: pipes appear in
rotation order, and the slots of one pipe follow its order when the
cluster is the pipe's tail and the reversed order at its head. Every
degree-2 guest vertex in the disk is a chord joining the slots of its two
edges, and two chords cross exactly when their slots interleave. The total
is cr₂ plus all disk crossings.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from sortedcontainers import SortedList

from perturbcross.exceptions import InstanceValidationError
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import CrossingLedger, Instance, PipeOrderSet, RotationSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chord:
    """A guest vertex drawn inside a disk, between slots ``lo`` < ``hi``."""

    vertex: str
    lo: int
    hi: int


def chords_cross(c1: Chord, c2: Chord) -> bool:
    """True iff the endpoints of two chords strictly interleave."""
    return c1.lo < c2.lo < c1.hi < c2.hi or c2.lo < c1.lo < c2.hi < c1.hi


def count_interleavings_naive(chords: Sequence[Chord]) -> int:
    """Quadratic reference count of crossing chord pairs."""
    return sum(1 for c1, c2 in itertools.combinations(chords, 2) if chords_cross(c1, c2))


def count_interleavings(chords: Iterable[Chord]) -> int:
    """Count crossing chord pairs in O(c log c).

    Chords are visited by left slot; a chord crosses every earlier chord
    whose right slot falls strictly inside it. Slots are distinct.

    Example:
        >>> count_interleavings([Chord("a", 0, 2), Chord("b", 1, 3)])
        1
        >>> count_interleavings([Chord("a", 0, 3), Chord("b", 1, 2)])
        0
    """
    seen: SortedList = SortedList()
    total = 0
    for chord in sorted(chords, key=lambda c: c.lo):
        total += seen.bisect_left(chord.hi) - seen.bisect_right(chord.lo)
        seen.add(chord.hi)
    return total


def interleavings_between(group_a: Iterable[Chord], group_b: Iterable[Chord]) -> int:
    """Crossings between one chord group and another."""
    listed_b = list(group_b)
    return sum(1 for c1 in group_a for c2 in listed_b if chords_cross(c1, c2))


class DiskModel:
    """Per-cluster slot layout and chord endpoints of one instance.

    Built once per (instance, rotation system); ``chords_at`` is then
    cheap for any order set, which the oracle relies on.
    """

    def __init__(self, instance: Instance, rotations: RotationSystem) -> None:
        self.instance = instance
        self.rotations = rotations
        pipes = instance.host.pipes
        self.sides: dict[str, tuple[tuple[str, bool], ...]] = {}
        for cluster in instance.host.clusters:
            rotation = rotations.get(cluster, ())
            if sorted(rotation) != sorted(instance.host.incidence.get(cluster, ())):
                raise InstanceValidationError(
                    f"Rotation at '{cluster}' does not list exactly its incident pipes"
                )
            self.sides[cluster] = tuple((p, pipes[p].tail == cluster) for p in rotation)

        self.ends: dict[str, tuple[tuple[str, str, str], ...]] = {}
        guest = instance.guest
        for cluster, vertices in instance.cluster_preimage.items():
            ends = []
            for vertex in vertices:
                incident = guest.incidence.get(vertex, ())
                if len(incident) > 2:
                    raise InstanceValidationError(
                        f"Guest vertex '{vertex}' has degree {len(incident)}; only cycles and paths are supported"
                    )
                if len(incident) == 2:
                    ends.append((vertex, incident[0], incident[1]))
            self.ends[cluster] = tuple(ends)

    def slots_at(self, cluster: str, orders: Mapping[str, Sequence[str]]) -> dict[str, int]:
        """Edge id mapped to its slot position on the disk boundary."""
        slot: dict[str, int] = {}
        position = 0
        for pipe, at_tail in self.sides[cluster]:
            order = orders[pipe]
            for edge in (order if at_tail else reversed(order)):
                slot[edge] = position
                position += 1
        return slot

    def chords_at(self, cluster: str, orders: Mapping[str, Sequence[str]]) -> list[Chord]:
        slot = self.slots_at(cluster, orders)
        chords = []
        for vertex, e1, e2 in self.ends.get(cluster, ()):
            s1, s2 = slot[e1], slot[e2]
            chords.append(Chord(vertex, min(s1, s2), max(s1, s2)))
        return chords

    def crossings_at(self, cluster: str, orders: Mapping[str, Sequence[str]]) -> int:
        return count_interleavings(self.chords_at(cluster, orders))


def disk_chords(
    instance: Instance, orders: PipeOrderSet, rotations: RotationSystem, cluster: str
) -> list[Chord]:
    """Chords inside the disk of one cluster."""
    return DiskModel(instance, rotations).chords_at(cluster, orders.orders)


@dataclass(frozen=True)
class Evaluation:
    """Result of ``evaluate``.

    Attributes:
        total: cr₂ plus all disk crossings
        cr2: Weighted pipe crossings
        per_cluster: Disk crossings per cluster (clusters with none included)
    """

    total: int
    cr2: int
    per_cluster: dict[str, int]

    @property
    def disk_total(self) -> int:
        return self.total - self.cr2


def evaluate(
    instance: Instance,
    orders: PipeOrderSet,
    rotations: RotationSystem | None = None,
    ledger: CrossingLedger | None = None,
) -> Evaluation:
    """Exact crossing count of the perturbation given by ``orders``.

    Args:
        instance: Instance whose guest has maximum degree 2 (spurs allowed)
        orders: One order per pipe, in canonical orientation
        rotations: Rotation system; computed from the drawing when omitted
        ledger: Crossing ledger; computed from the drawing when omitted

    Returns:
        Evaluation with the total and the per-cluster breakdown

    Raises:
        OrderSetError: If the orders do not match the pipe preimages

    Example:
        >>> evaluate(wound_cycle(3, 3), PipeOrderSet.identity(wound_cycle(3, 3))).total
        0
    """
    orders.check(instance)
    if rotations is None:
        rotations = rotation_at(instance.host)
    if ledger is None:
        ledger = crossing_ledger(instance)
    model = DiskModel(instance, rotations)
    per_cluster = {c: model.crossings_at(c, orders.orders) for c in instance.host.clusters}
    total = ledger.cr2 + sum(per_cluster.values())
    logger.debug("evaluated order set: cr2=%d, total=%d", ledger.cr2, total)
    return Evaluation(total, ledger.cr2, per_cluster)


def check_certificate(
    instance: Instance,
    orders: PipeOrderSet,
    k: int,
    rotations: RotationSystem | None = None,
    ledger: CrossingLedger | None = None,
) -> bool:
    """True iff the perturbation given by ``orders`` has at most ``k`` crossings."""
    return evaluate(instance, orders, rotations, ledger).total <= k
