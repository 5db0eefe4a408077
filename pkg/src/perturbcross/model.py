"""Core domain types for perturbcross.

This module provides:
- Exact rational points (coordinates are ``fractions.Fraction``)
- The guest graph G, the host graph H with its drawing, and the simplicial map
- Instances, pipe order sets and crossing ledgers
- Validation of every instance invariant
- Builders for the wound-cycle family and random spur-free cycle instances
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property
from math import factorial

import networkx as nx

from perturbcross.exceptions import InstanceParseError, OrderSetError

logger = logging.getLogger(__name__)

Rat = Fraction

# cluster id -> ccw cyclic sequence of incident pipe ids
RotationSystem = dict[str, tuple[str, ...]]


def rat(value: str | int | Fraction) -> Fraction:
    """Parse an exact rational.

    Args:
        value: Integer, Fraction, or text such as "3", "-2" or "7/3"

    Returns:
        Fraction in lowest terms

    Example:
        >>> rat("7/3")
        Fraction(7, 3)
        >>> rat("4/2")
        Fraction(2, 1)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    text = value.strip()
    # Fraction() also accepts floats and "1e3"; coordinates must be exact
    num, _, den = text.partition("/")
    try:
        if not num.lstrip("+-").isdigit() or (den and not den.isdigit()):
            raise ValueError(text)
        result = Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceParseError(f"Not an exact rational: {value!r}") from e
    return result


def format_rat(value: Fraction) -> str:
    """Render a rational the way the text formats expect it.

    Example:
        >>> format_rat(Fraction(7, 3))
        '7/3'
        >>> format_rat(Fraction(4))
        '4'
    """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Point:
    """A point with exact rational coordinates."""

    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: str | int | Fraction, y: str | int | Fraction) -> Point:
        """Build a point from anything ``rat`` accepts.

        Example:
            >>> Point.of(1, "1/2")
            Point(x=Fraction(1, 1), y=Fraction(1, 2))
        """
        return cls(rat(x), rat(y))

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, factor: Fraction) -> Point:
        return Point(self.x * factor, self.y * factor)

    def __str__(self) -> str:
        return f"({format_rat(self.x)}, {format_rat(self.y)})"


class Shape(StrEnum):
    """Shape of a guest graph, always computed from the graph itself."""

    CYCLE = "cycle"
    PATHS = "disjoint-paths"
    GENERAL = "general"


@dataclass(frozen=True)
class GuestGraph:
    """The guest graph G.

    Attributes:
        vertices: Vertex ids
        edges: Edge id mapped to its endpoint pair (a, b)
    """

    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, str]] = field(default_factory=dict)

    @cached_property
    def incidence(self) -> dict[str, tuple[str, ...]]:
        """Vertex id mapped to the ids of its incident edges."""
        table: dict[str, list[str]] = {v: [] for v in self.vertices}
        for edge_id, (a, b) in self.edges.items():
            table.setdefault(a, []).append(edge_id)
            if b != a:
                table.setdefault(b, []).append(edge_id)
        return {v: tuple(es) for v, es in table.items()}

    def degree(self, vertex: str) -> int:
        return len(self.incidence.get(vertex, ()))

    def other_end(self, edge_id: str, vertex: str) -> str:
        a, b = self.edges[edge_id]
        return b if a == vertex else a

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for edge_id, (a, b) in self.edges.items():
            graph.add_edge(a, b, key=edge_id)
        return graph

    @cached_property
    def shape(self) -> Shape:
        """Verified shape tag.

        cycle: connected and every degree is 2.
        disjoint-paths: every degree at most 2 and acyclic.
        """
        if not self.vertices:
            return Shape.GENERAL
        degrees = [self.degree(v) for v in self.vertices]
        graph = self.to_networkx()
        if all(d == 2 for d in degrees) and nx.is_connected(graph):
            return Shape.CYCLE
        if all(d <= 2 for d in degrees) and nx.is_forest(nx.Graph(graph)) and (
            graph.number_of_edges() == nx.Graph(graph).number_of_edges()
        ):
            return Shape.PATHS
        return Shape.GENERAL


@dataclass(frozen=True)
class Cluster:
    """A host vertex. Clusters created by expansions carry no position."""

    id: str
    position: Point | None = None


@dataclass(frozen=True)
class Pipe:
    """A host edge with its drawing.

    ``polyline`` runs from the position of ``u`` to the position of ``v``,
    bend points included. It is None when an endpoint has no position.
    """

    id: str
    u: str
    v: str
    polyline: tuple[Point, ...] | None = None

    @property
    def tail(self) -> str:
        """Canonical tail: the endpoint with the smaller id."""
        return min(self.u, self.v)

    @property
    def head(self) -> str:
        return max(self.u, self.v)

    def other(self, cluster: str) -> str:
        return self.v if cluster == self.u else self.u

    def segments(self) -> Iterator[tuple[Point, Point]]:
        if self.polyline is None:
            return
        yield from zip(self.polyline, self.polyline[1:])


@dataclass(frozen=True)
class HostGraph:
    """The host graph H with its straight-line (or polyline) drawing γ."""

    clusters: dict[str, Cluster]
    pipes: dict[str, Pipe]

    @cached_property
    def incidence(self) -> dict[str, tuple[str, ...]]:
        """Cluster id mapped to the ids of its incident pipes."""
        table: dict[str, list[str]] = {c: [] for c in self.clusters}
        for pipe in self.pipes.values():
            table.setdefault(pipe.u, []).append(pipe.id)
            table.setdefault(pipe.v, []).append(pipe.id)
        return {c: tuple(ps) for c, ps in table.items()}

    @cached_property
    def pipe_lookup(self) -> dict[frozenset[str], str]:
        return {frozenset((p.u, p.v)): p.id for p in self.pipes.values()}

    def degree(self, cluster: str) -> int:
        return len(self.incidence.get(cluster, ()))

    def pipe_between(self, a: str, b: str) -> str | None:
        return self.pipe_lookup.get(frozenset((a, b)))

    @property
    def is_geometric(self) -> bool:
        return all(c.position is not None for c in self.clusters.values())

    def position(self, cluster: str) -> Point:
        pos = self.clusters[cluster].position
        if pos is None:
            raise ValueError(f"Cluster '{cluster}' has no position")
        return pos

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.clusters)
        graph.add_edges_from((p.u, p.v) for p in self.pipes.values())
        return graph


@dataclass(frozen=True)
class SimplicialMap:
    """λ: guest vertices to clusters, guest edges to pipes."""

    vertex_map: dict[str, str]
    edge_map: dict[str, str]


@dataclass(frozen=True)
class Instance:
    """A guest graph mapped onto a drawn host graph."""

    guest: GuestGraph
    host: HostGraph
    map: SimplicialMap

    @cached_property
    def cluster_preimage(self) -> dict[str, tuple[str, ...]]:
        """Cluster id mapped to λ⁻¹[u]."""
        table: dict[str, list[str]] = {c: [] for c in self.host.clusters}
        for vertex in self.guest.vertices:
            table.setdefault(self.map.vertex_map.get(vertex, ""), []).append(vertex)
        table.pop("", None)
        return {c: tuple(vs) for c, vs in table.items()}

    @cached_property
    def pipe_preimage(self) -> dict[str, tuple[str, ...]]:
        """Pipe id mapped to λ⁻¹[uv], in edge insertion order."""
        table: dict[str, list[str]] = {p: [] for p in self.host.pipes}
        for edge_id in self.guest.edges:
            table.setdefault(self.map.edge_map.get(edge_id, ""), []).append(edge_id)
        table.pop("", None)
        return {p: tuple(es) for p, es in table.items()}

    def weight(self, pipe: str) -> int:
        return len(self.pipe_preimage.get(pipe, ()))

    @cached_property
    def weights(self) -> dict[str, int]:
        return {p: self.weight(p) for p in self.host.pipes}

    def order_space_size(self) -> int:
        """Number of pipe order sets, the product of w! over all pipes."""
        size = 1
        for w in self.weights.values():
            size *= factorial(w)
        return size

    @property
    def potential(self) -> int:
        """Φ = |E(G)| − |E(H)|."""
        return len(self.guest.edges) - len(self.host.pipes)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of ``validate``.

    Violations make the instance inadmissible. Spurs and forks are
    findings: they restrict what the solver accepts but are legal data.
    """

    violations: tuple[str, ...] = ()
    spurs: tuple[str, ...] = ()
    forks: tuple[tuple[str, str], ...] = ()

    @property
    def admissible(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class PipeOrderSet:
    """π_Λ: one total order of λ⁻¹[uv] per pipe.

    Orders are stored in canonical pipe orientation, read from the tail
    (smaller cluster id) along the pipe: ccw around the tail, reversed
    ccw around the head.
    """

    orders: dict[str, tuple[str, ...]]

    def __getitem__(self, pipe: str) -> tuple[str, ...]:
        return self.orders[pipe]

    def check(self, instance: Instance) -> None:
        """Raise OrderSetError unless every order permutes exactly its preimage."""
        missing = set(instance.host.pipes) - set(self.orders)
        if missing:
            raise OrderSetError(f"No order for pipes: {', '.join(sorted(missing))}")
        unknown = set(self.orders) - set(instance.host.pipes)
        if unknown:
            raise OrderSetError(f"Orders name unknown pipes: {', '.join(sorted(unknown))}")
        for pipe, order in self.orders.items():
            expected = instance.pipe_preimage.get(pipe, ())
            if len(order) != len(expected) or Counter(order) != Counter(expected):
                raise OrderSetError(
                    f"Order of pipe '{pipe}' is not a permutation of its {len(expected)} edges"
                )

    def mirrored(self) -> PipeOrderSet:
        """Every order reversed (the reflection of the plane)."""
        return PipeOrderSet({p: tuple(reversed(o)) for p, o in self.orders.items()})

    @classmethod
    def identity(cls, instance: Instance) -> PipeOrderSet:
        """Each pipe ordered by edge id."""
        return cls({p: tuple(sorted(es)) for p, es in instance.pipe_preimage.items()})


def pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CrossingLedger:
    """Pipe weights and the weighted pipe-crossing count cr₂.

    Attributes:
        w: Pipe id mapped to |λ⁻¹[uv]|
        W: Pipe id mapped to the multiplicity-weighted weight of pipes crossing it
        crossing_pairs: Unordered pipe pairs (sorted tuples) with their number
            of transversal intersection points
        cr2: Σ multiplicity·w(e₁)·w(e₂) over crossing pairs
    """

    w: dict[str, int]
    W: dict[str, int]
    crossing_pairs: Counter[tuple[str, str]]
    cr2: int

    @classmethod
    def build(cls, weights: Mapping[str, int], pairs: Mapping[tuple[str, str], int]) -> CrossingLedger:
        """Derive W and cr₂ from weights and crossing multiplicities."""
        big_w = {p: 0 for p in weights}
        cr2 = 0
        counter: Counter[tuple[str, str]] = Counter()
        for (a, b), mult in pairs.items():
            if mult <= 0:
                continue
            counter[pair_key(a, b)] += mult
            big_w[a] = big_w.get(a, 0) + mult * weights.get(b, 0)
            big_w[b] = big_w.get(b, 0) + mult * weights.get(a, 0)
            cr2 += mult * weights.get(a, 0) * weights.get(b, 0)
        return cls(dict(weights), big_w, counter, cr2)

    def half_sum(self) -> int:
        """½ Σ w(uv)·W(uv), which always equals cr₂."""
        total = sum(self.w.get(p, 0) * big for p, big in self.W.items())
        return total // 2

    def is_consistent(self) -> bool:
        direct = sum(m * self.w.get(a, 0) * self.w.get(b, 0) for (a, b), m in self.crossing_pairs.items())
        return direct == self.cr2 == self.half_sum()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _on_open_segment(p: Point, a: Point, b: Point) -> bool:
    cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    if cross != 0:
        return False
    return min(a, b) < p < max(a, b)


def find_spurs(instance: Instance) -> list[str]:
    """Guest vertices whose two incident edges map to the same pipe."""
    spurs = []
    for vertex in instance.guest.vertices:
        edges = instance.guest.incidence.get(vertex, ())
        pipes = [instance.map.edge_map.get(e) for e in edges]
        if len(pipes) != len(set(pipes)):
            spurs.append(vertex)
    return spurs


def validate(instance: Instance) -> ValidationReport:
    """Check every invariant of an instance.

    Args:
        instance: Structurally parsed instance

    Returns:
        Report listing violations (empty when admissible), spurs and forks

    Example:
        >>> validate(wound_cycle(3, 3)).violations
        ()
    """
    violations: list[str] = []
    guest, host, lam = instance.guest, instance.host, instance.map

    seen_pairs: set[frozenset[str]] = set()
    for edge_id, (a, b) in guest.edges.items():
        if a == b:
            violations.append(f"guest edge '{edge_id}' is a loop")
        pair = frozenset((a, b))
        if pair in seen_pairs:
            violations.append(f"guest edge '{edge_id}' is parallel to another edge")
        seen_pairs.add(pair)

    pipe_pairs: set[frozenset[str]] = set()
    for pipe in host.pipes.values():
        if pipe.u == pipe.v:
            violations.append(f"pipe '{pipe.id}' is a loop")
        pair = frozenset((pipe.u, pipe.v))
        if pair in pipe_pairs:
            violations.append(f"pipe '{pipe.id}' is parallel to another pipe")
        pipe_pairs.add(pair)
        violations.extend(_polyline_violations(host, pipe))

    for vertex in guest.vertices:
        cluster = lam.vertex_map.get(vertex)
        if cluster is None:
            violations.append(f"vertex '{vertex}' is not mapped")
        elif cluster not in host.clusters:
            violations.append(f"vertex '{vertex}' maps to unknown cluster '{cluster}'")

    for edge_id, (a, b) in guest.edges.items():
        pipe_id = lam.edge_map.get(edge_id)
        if pipe_id is None:
            violations.append(f"edge '{edge_id}' is not mapped")
            continue
        if pipe_id not in host.pipes:
            violations.append(f"edge '{edge_id}' maps to unknown pipe '{pipe_id}'")
            continue
        ca, cb = lam.vertex_map.get(a), lam.vertex_map.get(b)
        if ca == cb:
            violations.append(f"edge '{edge_id}' maps to no pipe (both ends at cluster '{ca}')")
            continue
        pipe = host.pipes[pipe_id]
        if {ca, cb} != {pipe.u, pipe.v}:
            violations.append(
                f"edge '{edge_id}' maps to pipe '{pipe_id}' but its ends lie at '{ca}' and '{cb}'"
            )

    # slot conservation: every edge end at u occupies one slot of a pipe at u
    if not violations:
        for cluster, pipes in host.incidence.items():
            slots = sum(instance.weight(p) for p in pipes)
            ends = sum(guest.degree(v) for v in instance.cluster_preimage.get(cluster, ()))
            if slots != ends:
                violations.append(
                    f"slot conservation fails at '{cluster}': {slots} pipe slots, {ends} edge ends"
                )

    spurs = tuple(find_spurs(instance)) if not violations else ()
    forks = tuple(find_forks(instance)) if not violations else ()
    report = ValidationReport(tuple(violations), spurs, forks)
    logger.debug("validated instance: %d violations, %d spurs", len(violations), len(spurs))
    return report


def _polyline_violations(host: HostGraph, pipe: Pipe) -> list[str]:
    ends = (host.clusters.get(pipe.u), host.clusters.get(pipe.v))
    if ends[0] is None or ends[1] is None:
        return [f"pipe '{pipe.id}' references an unknown cluster"]
    if ends[0].position is None or ends[1].position is None:
        if pipe.polyline is not None:
            return [f"pipe '{pipe.id}' has a drawing but an endpoint has no position"]
        return []
    if pipe.polyline is None or len(pipe.polyline) < 2:
        return [f"pipe '{pipe.id}' has no drawing"]
    problems = []
    if pipe.polyline[0] != ends[0].position or pipe.polyline[-1] != ends[1].position:
        problems.append(f"pipe '{pipe.id}' does not run from '{pipe.u}' to '{pipe.v}'")
    for p, q in pipe.segments():
        if p == q:
            problems.append(f"pipe '{pipe.id}' repeats a bend point")
    for cluster in host.clusters.values():
        if cluster.position is None or cluster.id in (pipe.u, pipe.v):
            continue
        if any(
            _on_open_segment(cluster.position, p, q) or cluster.position in (p, q)
            for p, q in pipe.segments()
        ):
            problems.append(f"pipe '{pipe.id}' passes through cluster '{cluster.id}'")
    return problems


def touches(point: Point, a: Point, b: Point) -> bool:
    cross = (b.x - a.x) * (point.y - a.y) - (b.y - a.y) * (point.x - a.x)
    return cross == 0 and min(a, b) <= point <= max(a, b)


def find_forks(instance: Instance) -> list[tuple[str, str]]:
    """(vertex, pipe) pairs where a vertex sits inside a nonincident pipe's drawing."""
    host = instance.host
    forks = []
    for vertex in instance.guest.vertices:
        pos = host.clusters[instance.map.vertex_map[vertex]].position
        if pos is None:
            continue
        incident_pipes = {instance.map.edge_map[e] for e in instance.guest.incidence.get(vertex, ())}
        for pipe in host.pipes.values():
            if pipe.id in incident_pipes or pipe.polyline is None:
                continue
            if pos in (pipe.polyline[0], pipe.polyline[-1]):
                continue
            if any(touches(pos, p, q) for p, q in pipe.segments()):
                forks.append((vertex, pipe.id))
    return forks


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_instance(
    positions: Mapping[str, Point | None],
    pipes: Iterable[tuple[str, str, str]] | Iterable[Pipe],
    vertex_map: Mapping[str, str],
    edges: Mapping[str, tuple[str, str]],
    edge_map: Mapping[str, str] | None = None,
) -> Instance:
    """Assemble an instance from plain tables.

    Pipes given as (id, u, v) are drawn as straight segments. When
    ``edge_map`` is omitted each edge maps to the pipe between its ends.
    """
    clusters = {cid: Cluster(cid, pos) for cid, pos in positions.items()}
    pipe_table: dict[str, Pipe] = {}
    for item in pipes:
        if isinstance(item, Pipe):
            pipe_table[item.id] = item
            continue
        pid, u, v = item
        pu, pv = positions.get(u), positions.get(v)
        polyline = (pu, pv) if pu is not None and pv is not None else None
        pipe_table[pid] = Pipe(pid, u, v, polyline)
    host = HostGraph(clusters, pipe_table)
    vertices = tuple(vertex_map)
    guest = GuestGraph(vertices, dict(edges))
    if edge_map is None:
        resolved: dict[str, str] = {}
        for edge_id, (a, b) in edges.items():
            pid = host.pipe_between(vertex_map[a], vertex_map[b])
            if pid is None:
                raise ValueError(f"No pipe between the clusters of edge '{edge_id}'")
            resolved[edge_id] = pid
        edge_map = resolved
    return Instance(guest, host, SimplicialMap(dict(vertex_map), dict(edge_map)))


def polygon_positions(k: int) -> list[Point]:
    """k integer points in convex position: (i, i²) on a parabola."""
    return [Point(Fraction(i), Fraction(i * i)) for i in range(k)]


def wound_cycle(n: int, k: int) -> Instance:
    """C_n wound n/k times around a crossing-free convex k-gon.

    Args:
        n: Guest cycle length
        k: Host polygon size, at least 3 and dividing n

    Returns:
        Instance whose crossing number is n/k − 1

    Example:
        >>> wound_cycle(6, 3).weight("p0")
        2
    """
    if k < 3 or n % k:
        raise ValueError(f"Need k >= 3 dividing n, got n={n}, k={k}")
    points = polygon_positions(k)
    positions = {f"c{i}": points[i] for i in range(k)}
    pipes = [(f"p{i}", f"c{i}", f"c{(i + 1) % k}") for i in range(k)]
    vertex_map = {f"g{i}": f"c{i % k}" for i in range(n)}
    edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % n}") for i in range(n)}
    edge_map = {f"e{i}": f"p{i % k}" for i in range(n)}
    return build_instance(positions, pipes, vertex_map, edges, edge_map)


# Small hosts in general position used for random corpora.
SAMPLE_HOSTS: dict[str, tuple[dict[str, tuple[int, int]], list[tuple[str, str]]]] = {
    "crossed-square": (
        {"a": (0, 0), "b": (2, 0), "c": (2, 2), "d": (0, 2)},
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c"), ("b", "d")],
    ),
    "wheel": (
        {"a": (0, 0), "b": (4, 0), "c": (2, 4), "m": (2, 1)},
        [("a", "b"), ("b", "c"), ("c", "a"), ("a", "m"), ("b", "m"), ("c", "m")],
    ),
    "pentagram": (
        {"a": (0, 0), "b": (4, 0), "c": (5, 3), "d": (2, 5), "e": (-1, 3)},
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"), ("a", "c"), ("c", "e"), ("e", "b"), ("b", "d"), ("d", "a")],
    ),
    "bowtie": (
        {"a": (0, 0), "b": (0, 2), "m": (2, 1), "c": (4, 0), "d": (4, 2)},
        [("a", "b"), ("a", "m"), ("b", "m"), ("m", "c"), ("m", "d"), ("c", "d")],
    ),
    "theta": (
        {"a": (0, 0), "b": (4, 0), "t": (2, 2), "s": (2, -2), "m": (2, 0)},
        [("a", "t"), ("t", "b"), ("a", "s"), ("s", "b"), ("a", "m"), ("m", "b")],
    ),
}


def sample_host(name: str) -> Instance:
    """A host from SAMPLE_HOSTS with an empty guest."""
    points, pairs = SAMPLE_HOSTS[name]
    positions = {c: Point(Fraction(x), Fraction(y)) for c, (x, y) in points.items()}
    pipes = [(f"{u}{v}", u, v) for u, v in pairs]
    return build_instance(positions, pipes, {}, {})


def random_cycle_instance(
    rng: random.Random,
    host_name: str | None = None,
    length: int | None = None,
    budget: int = 1_000_000,
    max_tries: int = 10_000,
) -> Instance:
    """Random spur-free cycle mapped onto one of the sample hosts.

    The cycle is a closed walk that never turns back along the pipe it
    arrived on, including at its start. Walks whose order space exceeds
    ``budget`` are rejected.

    Raises:
        ValueError: If no admissible walk is found within ``max_tries``
    """
    name = host_name or rng.choice(sorted(SAMPLE_HOSTS))
    template = sample_host(name)
    graph = template.host.to_networkx()
    for _ in range(max_tries):
        size = length or rng.randint(3, 9)
        start = rng.choice(sorted(graph.nodes))
        walk = [start]
        for _ in range(size - 1):
            choices = sorted(n for n in graph.neighbors(walk[-1]) if len(walk) < 2 or n != walk[-2])
            walk.append(rng.choice(choices))
        # closing step and the turn at the start must not reverse
        if walk[-1] == start or not graph.has_edge(walk[-1], start):
            continue
        if walk[-2] == start or walk[1] == walk[-1]:
            continue
        vertex_map = {f"g{i}": c for i, c in enumerate(walk)}
        edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % size}") for i in range(size)}
        instance = build_instance(
            {c.id: c.position for c in template.host.clusters.values()},
            template.host.pipes.values(),
            vertex_map,
            edges,
        )
        if instance.order_space_size() <= budget:
            return instance
    raise ValueError(f"No admissible random cycle on host '{name}'")
