"""Exact geometric predicates and the facts the solver extracts once.

This module provides:
- ``orient`` and ``segment_relation`` over rational points
- ``rotation_at``: ccw order of pipes around every cluster
- ``pipe_crossings`` and ``crossing_ledger``: transversal pipe crossings,
  enumerated either all-pairs or with a sweep over x
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from sortedcontainers import SortedList

from perturbcross.exceptions import DegenerateDrawingError, DegenerateRotationError, InstanceValidationError
from perturbcross.model import CrossingLedger, HostGraph, Instance, Point, RotationSystem, pair_key

logger = logging.getLogger(__name__)

Segment = tuple[Point, Point]


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q − p) × (r − p).

    Example:
        >>> orient(Point.of(0, 0), Point.of(1, 0), Point.of(0, 1))
        1
        >>> orient(Point.of(0, 0), Point.of(1, 1), Point.of(2, 2))
        0
    """
    value = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (value > 0) - (value < 0)


class RelationKind(StrEnum):
    DISJOINT = "disjoint"
    CROSSING = "proper-crossing"
    TOUCHING = "touching"
    OVERLAP = "collinear-overlap"


@dataclass(frozen=True)
class SegmentRelation:
    """How two segments meet.

    ``points`` holds the crossing point, the touching point(s), or the two
    ends of the shared piece, sorted.
    """

    kind: RelationKind
    points: tuple[Point, ...] = ()


def _between(p: Point, a: Point, b: Point) -> bool:
    # p is collinear with ab; lexicographic order runs along the line
    return min(a, b) <= p <= max(a, b)


def segment_relation(s1: Segment, s2: Segment) -> SegmentRelation:
    """Classify the intersection of two nondegenerate segments exactly.

    Example:
        >>> s = (Point.of(0, 0), Point.of(2, 2))
        >>> t = (Point.of(0, 2), Point.of(2, 0))
        >>> segment_relation(s, t)
        SegmentRelation(kind=<RelationKind.CROSSING: 'proper-crossing'>, points=(Point(x=Fraction(1, 1), y=Fraction(1, 1)),))
    """
    a, b = s1
    c, d = s2
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)

    if o1 == 0 and o2 == 0:
        lo = max(min(a, b), min(c, d))
        hi = min(max(a, b), max(c, d))
        if lo > hi:
            return SegmentRelation(RelationKind.DISJOINT)
        if lo == hi:
            return SegmentRelation(RelationKind.TOUCHING, (lo,))
        return SegmentRelation(RelationKind.OVERLAP, (lo, hi))

    if o1 * o2 < 0 and o3 * o4 < 0:
        direction = b - a
        other = d - c
        denom = direction.x * other.y - direction.y * other.x
        t = ((c.x - a.x) * other.y - (c.y - a.y) * other.x) / denom
        return SegmentRelation(RelationKind.CROSSING, (a + direction.scale(t),))

    touches = set()
    if o1 == 0 and _between(c, a, b):
        touches.add(c)
    if o2 == 0 and _between(d, a, b):
        touches.add(d)
    if o3 == 0 and _between(a, c, d):
        touches.add(a)
    if o4 == 0 and _between(b, c, d):
        touches.add(b)
    if touches:
        return SegmentRelation(RelationKind.TOUCHING, tuple(sorted(touches)))
    return SegmentRelation(RelationKind.DISJOINT)


# ---------------------------------------------------------------------------
# Rotation systems
# ---------------------------------------------------------------------------


def _half(v: Point) -> int:
    # 0 for directions in [0°, 180°), 1 for [180°, 360°)
    return 0 if v.y > 0 or (v.y == 0 and v.x > 0) else 1


def _compare_directions(v1: Point, v2: Point) -> int:
    h1, h2 = _half(v1), _half(v2)
    if h1 != h2:
        return h1 - h2
    cross = v1.x * v2.y - v1.y * v2.x
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def leaving_direction(host: HostGraph, pipe_id: str, cluster: str) -> Point:
    """Direction of the first segment of a pipe as it leaves a cluster."""
    pipe = host.pipes[pipe_id]
    if pipe.polyline is None:
        raise InstanceValidationError(f"Pipe '{pipe_id}' has no drawing")
    if cluster == pipe.u:
        return pipe.polyline[1] - pipe.polyline[0]
    return pipe.polyline[-2] - pipe.polyline[-1]


def rotation_at(host: HostGraph) -> RotationSystem:
    """Counterclockwise order of incident pipes at every cluster.

    Directions are compared by half-plane index and the orientation
    predicate, so no angle is ever computed. Each cyclic sequence starts at
    the direction closest to east, counterclockwise.

    Raises:
        InstanceValidationError: If a cluster has no position
        DegenerateRotationError: If two pipes leave a cluster in the same direction
    """
    rotations: RotationSystem = {}
    for cluster, pipes in host.incidence.items():
        if host.clusters[cluster].position is None:
            raise InstanceValidationError(f"Cluster '{cluster}' has no position")
        directions = {p: leaving_direction(host, p, cluster) for p in pipes}
        ordered = sorted(
            pipes,
            key=functools.cmp_to_key(lambda p, q: _compare_directions(directions[p], directions[q])),
        )
        for p, q in zip(ordered, ordered[1:]):
            if _compare_directions(directions[p], directions[q]) == 0:
                raise DegenerateRotationError(
                    f"Pipes '{p}' and '{q}' leave cluster '{cluster}' in the same direction"
                )
        rotations[cluster] = tuple(ordered)
    return rotations


# ---------------------------------------------------------------------------
# Pipe crossings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _PipeSegment:
    pipe: str
    index: int
    a: Point
    b: Point

    @property
    def min_x(self) -> Fraction:
        return min(self.a.x, self.b.x)

    @property
    def max_x(self) -> Fraction:
        return max(self.a.x, self.b.x)

    def y_range(self) -> tuple[Fraction, Fraction]:
        return min(self.a.y, self.b.y), max(self.a.y, self.b.y)


def _pipe_segments(host: HostGraph) -> list[_PipeSegment]:
    segments = []
    for pipe in host.pipes.values():
        if pipe.polyline is None:
            raise InstanceValidationError(f"Pipe '{pipe.id}' has no drawing")
        for index, (a, b) in enumerate(pipe.segments()):
            if a == b:
                raise DegenerateDrawingError(f"Pipe '{pipe.id}' has a zero-length segment")
            segments.append(_PipeSegment(pipe.id, index, a, b))
    return segments


def _crossing_count(host: HostGraph, s: _PipeSegment, t: _PipeSegment) -> Iterator[Point]:
    """Yield the transversal crossing point of two segments, if any.

    Raises DegenerateDrawingError on every other kind of contact, except
    that adjacent pipes may touch at their shared cluster and consecutive
    segments of one pipe at their shared bend.
    """
    relation = segment_relation((s.a, s.b), (t.a, t.b))
    if relation.kind == RelationKind.DISJOINT:
        return
    if s.pipe == t.pipe:
        if abs(s.index - t.index) == 1 and relation.kind == RelationKind.TOUCHING and len(relation.points) == 1:
            shared = s.b if s.index < t.index else s.a
            if relation.points[0] == shared:
                return
        raise DegenerateDrawingError(f"Pipe '{s.pipe}' intersects itself")
    if relation.kind == RelationKind.CROSSING:
        yield relation.points[0]
        return
    if relation.kind == RelationKind.TOUCHING and len(relation.points) == 1:
        p, q = host.pipes[s.pipe], host.pipes[t.pipe]
        for cluster in {p.u, p.v} & {q.u, q.v}:
            if host.clusters[cluster].position == relation.points[0]:
                return
    raise DegenerateDrawingError(
        f"Pipes '{s.pipe}' and '{t.pipe}' {relation.kind.value.replace('-', ' ')} at "
        + ", ".join(str(p) for p in relation.points)
    )


def _candidate_pairs_naive(segments: list[_PipeSegment]) -> Iterator[tuple[_PipeSegment, _PipeSegment]]:
    yield from itertools.combinations(segments, 2)


def _candidate_pairs_sweep(segments: list[_PipeSegment]) -> Iterator[tuple[_PipeSegment, _PipeSegment]]:
    """Pairs whose bounding boxes overlap, found by sweeping left to right."""
    active: SortedList = SortedList(key=lambda seg: (seg.max_x, seg.pipe, seg.index))
    for seg in sorted(segments, key=lambda s: (s.min_x, s.pipe, s.index)):
        while active and active[0].max_x < seg.min_x:
            active.pop(0)
        lo, hi = seg.y_range()
        for other in active:
            olo, ohi = other.y_range()
            if olo <= hi and lo <= ohi:
                yield other, seg
        active.add(seg)


def pipe_crossings(
    host: HostGraph, method: str = "sweep", *, with_points: bool = False
) -> Counter[tuple[str, str]] | tuple[Counter[tuple[str, str]], list[Point]]:
    """Count transversal intersection points between every pair of pipes.

    Args:
        host: Geometric host graph
        method: "sweep" (bounding-box sweep) or "naive" (all pairs, the reference)
        with_points: Also return the crossing points

    Returns:
        Counter keyed by sorted pipe-id pairs; with ``with_points`` a
        (counter, points) tuple

    Raises:
        DegenerateDrawingError: On touching or overlapping distinct pipes
    """
    segments = _pipe_segments(host)
    if method == "naive":
        pairs = _candidate_pairs_naive(segments)
    elif method == "sweep":
        pairs = _candidate_pairs_sweep(segments)
    else:
        raise ValueError(f"Unknown crossing method '{method}'")
    counter: Counter[tuple[str, str]] = Counter()
    points: list[Point] = []
    for s, t in pairs:
        for point in _crossing_count(host, s, t):
            counter[pair_key(s.pipe, t.pipe)] += 1
            points.append(point)
    logger.debug("%s crossing search: %d segments, %d crossing points", method, len(segments), len(points))
    if with_points:
        return counter, points
    return counter


def crossing_ledger(instance: Instance, method: str = "sweep") -> CrossingLedger:
    """Weights, crossing-weight sums and cr₂ of an instance.

    Example:
        >>> crossing_ledger(wound_cycle(6, 3)).cr2
        0
    """
    pairs = pipe_crossings(instance.host, method)
    assert isinstance(pairs, Counter)
    return CrossingLedger.build(instance.weights, pairs)
