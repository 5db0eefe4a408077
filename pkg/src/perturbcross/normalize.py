"""Turn a raw piecewise-linear drawing into an admissible instance.

The drawing φ of G is split into φ = γ∘λ: image points that matter become
clusters, maximal shared straight pieces become pipes, and every guest edge
is subdivided so each piece maps to exactly one pipe. Transversal
crossings stay crossings of γ; they are never promoted to clusters.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction

from perturbcross.exceptions import DegenerateDrawingError
from perturbcross.formats import RawDrawing
from perturbcross.model import (
    Cluster,
    GuestGraph,
    HostGraph,
    Instance,
    Pipe,
    Point,
    SimplicialMap,
    find_forks,
    find_spurs,
    touches,
)

logger = logging.getLogger(__name__)

LineKey = tuple[Fraction, Fraction, Fraction]


def _line_key(p: Point, q: Point) -> LineKey:
    """Canonical (a, b, c) with a·x + b·y = c and the first nonzero of a, b equal to 1."""
    a = q.y - p.y
    b = p.x - q.x
    c = a * p.x + b * p.y
    lead = a if a != 0 else b
    return a / lead, b / lead, c / lead


def _on_line(key: LineKey, p: Point) -> bool:
    a, b, c = key
    return a * p.x + b * p.y == c


def _strictly_inside(p: Point, a: Point, b: Point) -> bool:
    return min(a, b) < p < max(a, b)


def _fresh(base: str, taken: set[str]) -> str:
    """Return base, or base with the first free numeric suffix, and reserve it."""
    candidate, serial = base, 0
    while candidate in taken:
        serial += 1
        candidate = f"{base}_{serial}"
    taken.add(candidate)
    return candidate


def normalize(raw: RawDrawing) -> Instance:
    """Decompose a raw drawing into an instance (G′, H, λ, γ).

    Args:
        raw: Guest vertices with positions and one polyline per guest edge

    Returns:
        Instance whose clusters are the vertex images, bend points and the
        points where either lies inside another segment; overlapping
        collinear pieces share a pipe

    Raises:
        DegenerateDrawingError: If an input segment has zero length

    Example:
        >>> raw = parse_raw_drawing("vertex a 0 0\\nvertex b 3 0\\nedge a b : 1 1 2 1\\n")
        >>> len(normalize(raw).host.pipes)
        3
    """
    segments: list[tuple[str, int, Point, Point]] = []
    special: set[Point] = set(raw.vertices.values())
    for edge_id, (_, _, polyline) in raw.edges.items():
        special.update(polyline)
        for index, (p, q) in enumerate(zip(polyline, polyline[1:])):
            if p == q:
                raise DegenerateDrawingError(f"Edge '{edge_id}' has a zero-length segment at {p}")
            segments.append((edge_id, index, p, q))

    by_line: dict[LineKey, list[int]] = defaultdict(list)
    for position, (_, _, p, q) in enumerate(segments):
        by_line[_line_key(p, q)].append(position)

    # every special point inside a segment splits it; overlapping members of
    # one supporting line thereby share their atomic pieces
    pieces_of: dict[int, list[Point]] = {}
    for key, members in by_line.items():
        on_line = [pt for pt in special if _on_line(key, pt)]
        for position in members:
            _, _, p, q = segments[position]
            inner = [pt for pt in on_line if _strictly_inside(pt, p, q)]
            inner.sort(reverse=q < p)
            pieces_of[position] = [p, *inner, q]

    cluster_points: set[Point] = set(raw.vertices.values())
    piece_pairs: set[tuple[Point, Point]] = set()
    for chain in pieces_of.values():
        cluster_points.update(chain)
        for p, q in zip(chain, chain[1:]):
            piece_pairs.add((min(p, q), max(p, q)))

    cluster_id = {pt: f"c{i}" for i, pt in enumerate(sorted(cluster_points))}
    pipe_id = {pair: f"p{i}" for i, pair in enumerate(sorted(piece_pairs))}
    clusters = {cid: Cluster(cid, pt) for pt, cid in cluster_id.items()}
    pipes = {
        pid: Pipe(pid, cluster_id[p], cluster_id[q], (p, q))
        for (p, q), pid in pipe_id.items()
    }

    vertices: list[str] = list(raw.vertices)
    vertex_map = {v: cluster_id[pt] for v, pt in raw.vertices.items()}
    edges: dict[str, tuple[str, str]] = {}
    edge_map: dict[str, str] = {}
    by_edge: dict[str, list[int]] = defaultdict(list)
    for position, (edge_id, _, _, _) in enumerate(segments):
        by_edge[edge_id].append(position)

    vertex_taken = set(raw.vertices)
    edge_taken = set(raw.edges)
    for edge_id, (a, b, _) in raw.edges.items():
        route: list[Point] = []
        for position in by_edge[edge_id]:
            part = pieces_of[position]
            route.extend(part if not route else part[1:])
        if len(route) == 2:
            edges[edge_id] = (a, b)
            edge_map[edge_id] = pipe_id[(min(route), max(route))]
            continue
        names = [a] + [_fresh(f"{edge_id}~{k}", vertex_taken) for k in range(1, len(route) - 1)] + [b]
        for k, name in enumerate(names[1:-1], start=1):
            vertices.append(name)
            vertex_map[name] = cluster_id[route[k]]
        for k, (p, q) in enumerate(zip(route, route[1:])):
            sub_edge = _fresh(f"{edge_id}.{k}", edge_taken)
            edges[sub_edge] = (names[k], names[k + 1])
            edge_map[sub_edge] = pipe_id[(min(p, q), max(p, q))]

    instance = Instance(
        GuestGraph(tuple(vertices), edges),
        HostGraph(clusters, pipes),
        SimplicialMap(vertex_map, edge_map),
    )
    logger.info(
        "normalized drawing: %d clusters, %d pipes, %d guest edges",
        len(clusters), len(pipes), len(edges),
    )
    return instance


def detect_spurs(instance: Instance) -> list[str]:
    """Guest vertices whose two incident edges map to the same pipe.

    Example:
        >>> detect_spurs(wound_cycle(6, 3))
        []
    """
    return find_spurs(instance)


def detect_forks(subject: RawDrawing | Instance) -> list[tuple[str, str]]:
    """Vertices whose image lies in the relative interior of a nonincident edge.

    On a raw drawing the pairs are (vertex, edge); on an instance they are
    (vertex, pipe), which is always empty after normalization.
    """
    if isinstance(subject, Instance):
        return find_forks(subject)
    forks = []
    for vertex, position in subject.vertices.items():
        for edge_id, (a, b, polyline) in subject.edges.items():
            if vertex in (a, b) or position in (polyline[0], polyline[-1]):
                continue
            if any(touches(position, p, q) for p, q in zip(polyline, polyline[1:])):
                forks.append((vertex, edge_id))
    return forks


def prune(instance: Instance) -> Instance:
    """Drop zero-weight pipes and clusters with an empty preimage."""
    keep_pipes = {p: pipe for p, pipe in instance.host.pipes.items() if instance.weight(p) > 0}
    keep_clusters = {
        c: cluster for c, cluster in instance.host.clusters.items()
        if instance.cluster_preimage.get(c)
    }
    if len(keep_pipes) == len(instance.host.pipes) and len(keep_clusters) == len(instance.host.clusters):
        return instance
    logger.debug(
        "pruned %d pipes and %d clusters",
        len(instance.host.pipes) - len(keep_pipes),
        len(instance.host.clusters) - len(keep_clusters),
    )
    return Instance(instance.guest, HostGraph(keep_clusters, keep_pipes), instance.map)


def induced_drawing(instance: Instance) -> RawDrawing:
    """The drawing φ = γ∘λ realised by a geometric instance."""
    host = instance.host
    vertices = {v: host.position(c) for v, c in instance.map.vertex_map.items()}
    edges: dict[str, tuple[str, str, tuple[Point, ...]]] = {}
    for edge_id, (a, b) in instance.guest.edges.items():
        pipe = host.pipes[instance.map.edge_map[edge_id]]
        assert pipe.polyline is not None
        polyline = pipe.polyline if instance.map.vertex_map[a] == pipe.u else tuple(reversed(pipe.polyline))
        edges[edge_id] = (a, b, polyline)
    return RawDrawing(vertices, edges)
