"""Line-oriented text formats.

This module provides readers and writers for:
- Instance files (cluster / pipe / vertex / edge / mapv / mape lines)
- Order files (one ``order <pipe> : <edges...>`` line per pipe)
- Raw drawings (``vertex <id> <x> <y>`` and ``edge <a> <b> : <bends...>``)

``#`` starts a comment anywhere on a line. Coordinates are integers or
``p/q`` rationals.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field

from perturbcross.exceptions import InstanceParseError
from perturbcross.model import (
    Cluster,
    GuestGraph,
    HostGraph,
    Instance,
    Pipe,
    PipeOrderSet,
    Point,
    SimplicialMap,
    format_rat,
)


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens) for every non-blank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def _points(tokens: list[str], line: int) -> list[Point]:
    if len(tokens) % 2:
        raise InstanceParseError("Odd number of coordinates", line)
    try:
        return [Point.of(tokens[i], tokens[i + 1]) for i in range(0, len(tokens), 2)]
    except InstanceParseError as e:
        raise InstanceParseError(str(e), line) from e


def _split_colon(tokens: list[str], line: int) -> tuple[list[str], list[str] | None]:
    if ":" not in tokens:
        return tokens, None
    at = tokens.index(":")
    if tokens.count(":") > 1:
        raise InstanceParseError("More than one ':' separator", line)
    return tokens[:at], tokens[at + 1:]


def _define(table: dict[str, int], kind: str, ident: str, line: int) -> None:
    if ident in table:
        raise InstanceParseError(f"Duplicate {kind} id '{ident}' (first defined on line {table[ident]})", line)
    table[ident] = line


def parse_instance(text: str) -> Instance:
    """Parse an instance file.

    Args:
        text: File contents

    Returns:
        Parsed instance (not yet validated)

    Raises:
        InstanceParseError: On syntax errors, duplicate ids or dangling references

    Example:
        >>> inst = parse_instance('''
        ... cluster a 0 0
        ... cluster b 7/3 0
        ... cluster c 0 1
        ... pipe ab a b
        ... ''')
        >>> inst.host.clusters["b"].position.x
        Fraction(7, 3)
    """
    clusters: dict[str, Cluster] = {}
    pipe_specs: list[tuple[int, str, str, str, list[Point] | None]] = []
    vertices: list[str] = []
    edges: dict[str, tuple[str, str]] = {}
    vertex_map: dict[str, str] = {}
    edge_map: dict[str, str] = {}
    defined: dict[str, dict[str, int]] = {k: {} for k in ("cluster", "pipe", "vertex", "edge", "mapv", "mape")}
    refs: list[tuple[int, str, str]] = []

    for line, tokens in _lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "cluster":
            if len(args) not in (1, 3):
                raise InstanceParseError("Expected 'cluster <id> [<x> <y>]'", line)
            _define(defined["cluster"], "cluster", args[0], line)
            position = _points(args[1:], line)[0] if len(args) == 3 else None
            clusters[args[0]] = Cluster(args[0], position)
        elif keyword == "pipe":
            head, bends = _split_colon(args, line)
            if len(head) != 3:
                raise InstanceParseError("Expected 'pipe <id> <u> <v> [: bends]'", line)
            _define(defined["pipe"], "pipe", head[0], line)
            points = _points(bends, line) if bends is not None else None
            pipe_specs.append((line, head[0], head[1], head[2], points))
            refs += [(line, "cluster", head[1]), (line, "cluster", head[2])]
        elif keyword == "vertex":
            if len(args) != 1:
                raise InstanceParseError("Expected 'vertex <id>'", line)
            _define(defined["vertex"], "vertex", args[0], line)
            vertices.append(args[0])
        elif keyword == "edge":
            if len(args) != 3:
                raise InstanceParseError("Expected 'edge <id> <a> <b>'", line)
            _define(defined["edge"], "edge", args[0], line)
            edges[args[0]] = (args[1], args[2])
            refs += [(line, "vertex", args[1]), (line, "vertex", args[2])]
        elif keyword == "mapv":
            if len(args) != 2:
                raise InstanceParseError("Expected 'mapv <vertex> <cluster>'", line)
            _define(defined["mapv"], "vertex mapping for", args[0], line)
            vertex_map[args[0]] = args[1]
            refs += [(line, "vertex", args[0]), (line, "cluster", args[1])]
        elif keyword == "mape":
            if len(args) != 2:
                raise InstanceParseError("Expected 'mape <edge> <pipe>'", line)
            _define(defined["mape"], "edge mapping for", args[0], line)
            edge_map[args[0]] = args[1]
            refs += [(line, "edge", args[0]), (line, "pipe", args[1])]
        else:
            raise InstanceParseError(f"Unknown keyword '{keyword}'", line)

    for line, kind, ident in refs:
        if ident not in defined[kind]:
            raise InstanceParseError(f"Reference to undefined {kind} '{ident}'", line)

    pipes: dict[str, Pipe] = {}
    for line, pid, u, v, bends in pipe_specs:
        pu, pv = clusters[u].position, clusters[v].position
        if pu is None or pv is None:
            if bends:
                raise InstanceParseError(f"Pipe '{pid}' has bends but an endpoint has no position", line)
            pipes[pid] = Pipe(pid, u, v, None)
        else:
            pipes[pid] = Pipe(pid, u, v, (pu, *(bends or []), pv))

    host = HostGraph(clusters, pipes)
    guest = GuestGraph(tuple(vertices), edges)
    return Instance(guest, host, SimplicialMap(vertex_map, edge_map))


def serialize_instance(instance: Instance) -> str:
    """Write an instance in the text format read by ``parse_instance``."""
    out: list[str] = []
    for cluster in instance.host.clusters.values():
        if cluster.position is None:
            out.append(f"cluster {cluster.id}")
        else:
            out.append(f"cluster {cluster.id} {format_rat(cluster.position.x)} {format_rat(cluster.position.y)}")
    for pipe in instance.host.pipes.values():
        line = f"pipe {pipe.id} {pipe.u} {pipe.v}"
        if pipe.polyline is not None and len(pipe.polyline) > 2:
            bends = " ".join(f"{format_rat(p.x)} {format_rat(p.y)}" for p in pipe.polyline[1:-1])
            line += f" : {bends}"
        out.append(line)
    out.extend(f"vertex {v}" for v in instance.guest.vertices)
    out.extend(f"edge {e} {a} {b}" for e, (a, b) in instance.guest.edges.items())
    out.extend(f"mapv {v} {c}" for v, c in instance.map.vertex_map.items())
    out.extend(f"mape {e} {p}" for e, p in instance.map.edge_map.items())
    return "\n".join(out) + "\n"


def parse_orders(text: str) -> PipeOrderSet:
    """Parse an order file.

    Raises:
        InstanceParseError: On malformed lines or a pipe listed twice

    Example:
        >>> parse_orders("order p0 : e0 e3\\n").orders
        {'p0': ('e0', 'e3')}
    """
    orders: dict[str, tuple[str, ...]] = {}
    for line, tokens in _lines(text):
        if tokens[0] != "order":
            raise InstanceParseError(f"Unknown keyword '{tokens[0]}'", line)
        head, members = _split_colon(tokens[1:], line)
        if len(head) != 1 or members is None:
            raise InstanceParseError("Expected 'order <pipe-id> : <edge-id> ...'", line)
        if head[0] in orders:
            raise InstanceParseError(f"Duplicate order for pipe '{head[0]}'", line)
        orders[head[0]] = tuple(members)
    return PipeOrderSet(orders)


def serialize_orders(orders: PipeOrderSet) -> str:
    """Write an order file, pipes sorted by id."""
    lines = []
    for pipe in sorted(orders.orders):
        members = " ".join(orders.orders[pipe])
        lines.append(f"order {pipe} : {members}".rstrip())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RawDrawing:
    """A piecewise-linear drawing φ of a guest graph.

    Attributes:
        vertices: Vertex id mapped to its image
        edges: Edge id mapped to (a, b, polyline from φ(a) to φ(b))
    """

    vertices: dict[str, Point]
    edges: dict[str, tuple[str, str, tuple[Point, ...]]] = field(default_factory=dict)


def parse_raw_drawing(text: str) -> RawDrawing:
    """Parse a raw drawing file.

    Edges get ids ``e0, e1, ...`` in file order.

    Example:
        >>> raw = parse_raw_drawing("vertex a 0 0\\nvertex b 2 0\\nedge a b : 1 1\\n")
        >>> len(raw.edges["e0"][2])
        3
    """
    vertices: dict[str, Point] = {}
    edges: dict[str, tuple[str, str, tuple[Point, ...]]] = {}
    pending: list[tuple[int, str, str, list[Point]]] = []
    for line, tokens in _lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "vertex":
            if len(args) != 3:
                raise InstanceParseError("Expected 'vertex <id> <x> <y>'", line)
            if args[0] in vertices:
                raise InstanceParseError(f"Duplicate vertex id '{args[0]}'", line)
            vertices[args[0]] = _points(args[1:], line)[0]
        elif keyword == "edge":
            head, bends = _split_colon(args, line)
            if len(head) != 2:
                raise InstanceParseError("Expected 'edge <a> <b> [: bends]'", line)
            pending.append((line, head[0], head[1], _points(bends or [], line)))
        else:
            raise InstanceParseError(f"Unknown keyword '{keyword}'", line)

    for index, (line, a, b, bends) in enumerate(pending):
        for end in (a, b):
            if end not in vertices:
                raise InstanceParseError(f"Reference to undefined vertex '{end}'", line)
        edges[f"e{index}"] = (a, b, (vertices[a], *bends, vertices[b]))
    return RawDrawing(vertices, edges)


def serialize_raw_drawing(raw: RawDrawing) -> str:
    """Write a raw drawing; edge ids are not part of the format."""
    out = [f"vertex {v} {format_rat(p.x)} {format_rat(p.y)}" for v, p in raw.vertices.items()]
    for a, b, polyline in raw.edges.values():
        line = f"edge {a} {b}"
        if len(polyline) > 2:
            line += " : " + " ".join(f"{format_rat(p.x)} {format_rat(p.y)}" for p in polyline[1:-1])
        out.append(line)
    return "\n".join(out) + "\n"
