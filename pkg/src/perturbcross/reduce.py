"""3SAT to crossing-number instances.

Every variable x_j gets a host path along row y = j+1 that dips to the
x-axis wherever one of its clauses sits; the three variables of a clause
share the four clause clusters u_{5i}..u_{5i+3}. Each variable's guest
path runs east, back west and east again (strands P1, P2, P3), and every
occurrence replaces a stretch of P1 and P3 by two zigzag gadgets. A short
clause path dives through the middle clause pipe.

This module provides:
- ``build_paths_instance``: the disjoint-paths construction
- ``build_cycle_instance``: the same, closed into a single cycle by
  matching arcs routed below the drawing
- ``sidecar``: JSON-ready provenance of a reduction
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from perturbcross.cnf import CNF
from perturbcross.exceptions import DegenerateDrawingError, ReductionError
from perturbcross.geometry import crossing_ledger
from perturbcross.model import Instance, Pipe, Point, build_instance

logger = logging.getLogger(__name__)

# cluster offsets from u_{5i}, traversed west to east
A_PRIME = (0, 1, 2, 3, 2, 1, 2, 3)
B_PRIME = (0, 1, 2, 1, 0, 1, 2, 3)
# pass (1st, 2nd or 3rd sweep across the clause) of each gadget edge
A_PASSES = (1, 1, 1, 2, 2, 3, 3)
B_PASSES = (1, 1, 2, 2, 3, 3, 3)

CLAUSE_CROSSINGS = 13
VARIABLE_PIPE_WEIGHTS = (5, 7, 5)

# denominators tried when an arc layout turns out degenerate
_ARC_DENOMINATORS = (3, 7, 11, 13, 17, 19, 23, 29)

Strand = str  # "P1", "P2" or "P3"


@dataclass(frozen=True)
class Gadget:
    """The two zigzags one occurrence of a variable puts into a clause.

    Attributes:
        variable: Variable index
        clause: Clause index (1-based)
        positive: Whether the literal is unnegated
        a_strand: Strand carrying the A′ zigzag ("P1" when positive)
        a_edges: The 7 A′ edges, west to east
        b_edges: The 7 B′ edges, west to east
    """

    variable: int
    clause: int
    positive: bool
    a_strand: Strand
    a_edges: tuple[str, ...]
    b_edges: tuple[str, ...]

    @property
    def b_strand(self) -> Strand:
        return "P3" if self.a_strand == "P1" else "P1"


@dataclass
class ReductionOutput:
    """An instance built from a CNF, with K and the tables that explain it."""

    cnf: CNF
    instance: Instance
    k: int
    cr2: int
    cycle: bool = False
    clause_clusters: dict[int, tuple[str, str, str, str]] = field(default_factory=dict)
    clause_ends: dict[int, tuple[str, str]] = field(default_factory=dict)
    clause_path: dict[int, tuple[str, ...]] = field(default_factory=dict)
    clause_edge: dict[int, str] = field(default_factory=dict)
    clause_pipe: dict[int, str] = field(default_factory=dict)
    host_path: dict[int, tuple[str, ...]] = field(default_factory=dict)
    variable_path: dict[int, tuple[str, ...]] = field(default_factory=dict)
    strand: dict[str, Strand] = field(default_factory=dict)
    gadgets: dict[tuple[int, int], Gadget] = field(default_factory=dict)
    matching: tuple[str, ...] = ()

    def clause_variables(self, clause: int) -> list[int]:
        """Variables of a clause, ascending (which is bottom to top on the clause pipes)."""
        return sorted(abs(lit) for lit in self.cnf.clauses[clause - 1])


def check_cnf(cnf: CNF) -> None:
    """Reject formulas the construction cannot encode.

    Raises:
        ReductionError: If there are no clauses, or a clause does not have
            exactly 3 distinct variables within range
    """
    if not cnf.clauses:
        raise ReductionError("Formula has no clauses")
    for index, clause in enumerate(cnf.clauses, start=1):
        variables = {abs(lit) for lit in clause}
        if len(clause) != 3 or len(variables) != 3:
            raise ReductionError(f"Clause {index} must have exactly 3 distinct variables, got {list(clause)}")
        if any(lit == 0 or abs(lit) > cnf.num_vars for lit in clause):
            raise ReductionError(f"Clause {index} uses a variable outside 1..{cnf.num_vars}")


def pipe_name(a: str, b: str) -> str:
    lo, hi = sorted((a, b))
    return f"{lo}-{hi}"


class _Builder:
    """Accumulates the host, the guest and the provenance tables."""

    def __init__(self, cnf: CNF) -> None:
        check_cnf(cnf)
        self.cnf = cnf
        self.m = cnf.num_clauses
        self.n = cnf.num_vars
        # (variable, 5i) -> (clause i, literal is positive)
        self.occurrence: dict[tuple[int, int], tuple[int, bool]] = {}
        for i, clause in enumerate(cnf.clauses, start=1):
            for lit in clause:
                self.occurrence[(abs(lit), 5 * i)] = (i, lit > 0)
        self.shared = {(j, base + ell) for (j, base) in self.occurrence for ell in range(4)}
        self.positions: dict[str, Point] = {}
        self.pipes: dict[str, tuple[str, str]] = {}
        self.vertex_map: dict[str, str] = {}
        self.edges: dict[str, tuple[str, str]] = {}
        self.edge_map: dict[str, str] = {}

        self.clause_clusters: dict[int, tuple[str, str, str, str]] = {}
        self.clause_ends: dict[int, tuple[str, str]] = {}
        self.clause_path: dict[int, tuple[str, ...]] = {}
        self.clause_edge: dict[int, str] = {}
        self.clause_pipe: dict[int, str] = {}
        self.host_path: dict[int, tuple[str, ...]] = {}
        self.variable_path: dict[int, tuple[str, ...]] = {}
        self.strand: dict[str, Strand] = {}
        self.gadgets: dict[tuple[int, int], Gadget] = {}

        self._build_host()
        for j in range(1, self.n + 1):
            self._build_variable(j)
        for i in range(1, self.m + 1):
            self._build_clause(i)

    def cluster(self, j: int, i: int) -> str:
        return f"u{i}" if (j, i) in self.shared else f"x{j}.u{i}"

    def pipe(self, a: str, b: str) -> str:
        lo, hi = sorted((a, b))
        pid = pipe_name(lo, hi)
        self.pipes.setdefault(pid, (lo, hi))
        return pid

    def _build_host(self) -> None:
        for j in range(1, self.n + 1):
            path = []
            for i in range(3, 5 * self.m + 6):
                cid = self.cluster(j, i)
                self.positions[cid] = Point.of(i, 0) if (j, i) in self.shared else Point.of(i, j + 1)
                path.append(cid)
            for a, b in zip(path, path[1:]):
                self.pipe(a, b)
            self.host_path[j] = tuple(path)
        for i in range(1, self.m + 1):
            v, w = f"v{i}", f"w{i}"
            self.positions[v] = Point.of(5 * i + 1, 1)
            self.positions[w] = Point.of(5 * i + 2, -1)
            self.pipe(v, f"u{5 * i + 1}")
            self.pipe(f"u{5 * i + 2}", w)
            self.clause_clusters[i] = (f"u{5 * i}", f"u{5 * i + 1}", f"u{5 * i + 2}", f"u{5 * i + 3}")
            self.clause_ends[i] = (v, w)
            self.clause_pipe[i] = pipe_name(f"u{5 * i + 1}", f"u{5 * i + 2}")

    def _eastbound(
        self, j: int, start: int, stop: int, zigzag: dict[int, str]
    ) -> tuple[list[str], list[tuple[int, str, int] | None]]:
        """Clusters of an eastbound strand and, per edge, its gadget tag (clause, "A"/"B", k)."""
        seq: list[str] = []
        tags: list[tuple[int, str, int] | None] = []

        def push(cid: str, tag: tuple[int, str, int] | None = None) -> None:
            if seq:
                tags.append(tag)
            seq.append(cid)

        i = start
        while i <= stop:
            hit = self.occurrence.get((j, i))
            if hit is None:
                push(self.cluster(j, i))
                i += 1
                continue
            clause = hit[0]
            kind = zigzag[clause]
            pattern = A_PRIME if kind == "A" else B_PRIME
            push(self.cluster(j, i + pattern[0]))
            for k, offset in enumerate(pattern[1:], start=1):
                push(self.cluster(j, i + offset), (clause, kind, k))
            i += 4
        return seq, tags

    def _build_variable(self, j: int) -> None:
        on_p1: dict[int, str] = {}
        on_p3: dict[int, str] = {}
        for (var, _), (clause, positive) in self.occurrence.items():
            if var == j:
                on_p1[clause] = "A" if positive else "B"
                on_p3[clause] = "B" if positive else "A"
        p1, tags1 = self._eastbound(j, 3, 5 * self.m + 4, on_p1)
        p2 = [self.cluster(j, i) for i in range(5 * self.m + 4, 3, -1)]
        p3, tags3 = self._eastbound(j, 4, 5 * self.m + 5, on_p3)

        # P1, P2 and P3 share their turn vertices
        route = p1 + p2[1:] + p3[1:]
        strands = ["P1"] * (len(p1) - 1) + ["P2"] * (len(p2) - 1) + ["P3"] * (len(p3) - 1)
        tags = tags1 + [None] * (len(p2) - 1) + tags3
        vertices = [f"x{j}.{k}" for k in range(len(route))]
        for vertex, cid in zip(vertices, route):
            self.vertex_map[vertex] = cid
        groups: dict[tuple[int, str], list[tuple[int, str]]] = defaultdict(list)
        for k, (a, b) in enumerate(zip(route, route[1:])):
            edge = f"x{j}.e{k}"
            self.edges[edge] = (vertices[k], vertices[k + 1])
            self.edge_map[edge] = self.pipe(a, b)
            self.strand[edge] = strands[k]
            tag = tags[k]
            if tag is not None:
                groups[(tag[0], tag[1])].append((tag[2], edge))
        self.variable_path[j] = tuple(vertices)

        for clause, kind in on_p1.items():
            positive = kind == "A"
            a_edges = tuple(e for _, e in sorted(groups[(clause, "A")]))
            b_edges = tuple(e for _, e in sorted(groups[(clause, "B")]))
            self.gadgets[(j, clause)] = Gadget(j, clause, positive, "P1" if positive else "P3", a_edges, b_edges)

    def _build_clause(self, i: int) -> None:
        clusters = (f"v{i}", f"u{5 * i + 1}", f"u{5 * i + 2}", f"w{i}")
        vertices = tuple(f"c{i}.{k}" for k in range(4))
        for vertex, cid in zip(vertices, clusters):
            self.vertex_map[vertex] = cid
        for k in range(3):
            edge = f"c{i}.e{k}"
            self.edges[edge] = (vertices[k], vertices[k + 1])
            self.edge_map[edge] = self.pipe(clusters[k], clusters[k + 1])
        self.clause_path[i] = vertices
        self.clause_edge[i] = f"c{i}.e1"

    def instance(
        self,
        extra_pipes: Iterable[Pipe] = (),
        extra_edges: Mapping[str, tuple[str, str]] | None = None,
        extra_map: Mapping[str, str] | None = None,
    ) -> Instance:
        drawn = [Pipe(pid, a, b, (self.positions[a], self.positions[b])) for pid, (a, b) in self.pipes.items()]
        drawn.extend(extra_pipes)
        return build_instance(
            self.positions,
            drawn,
            self.vertex_map,
            {**self.edges, **(extra_edges or {})},
            {**self.edge_map, **(extra_map or {})},
        )

    def output(self, instance: Instance, cr2: int, matching: tuple[str, ...] = ()) -> ReductionOutput:
        return ReductionOutput(
            cnf=self.cnf,
            instance=instance,
            k=cr2 + CLAUSE_CROSSINGS * self.m,
            cr2=cr2,
            cycle=bool(matching),
            clause_clusters=self.clause_clusters,
            clause_ends=self.clause_ends,
            clause_path=self.clause_path,
            clause_edge=self.clause_edge,
            clause_pipe=self.clause_pipe,
            host_path=self.host_path,
            variable_path=self.variable_path,
            strand=self.strand,
            gadgets=self.gadgets,
            matching=matching,
        )


def build_paths_instance(cnf: CNF) -> ReductionOutput:
    """Encode a 3CNF as a disjoint-paths instance and its threshold K.

    Args:
        cnf: Formula whose clauses each have exactly 3 distinct variables

    Returns:
        ReductionOutput with K = cr₂ + 13m

    Raises:
        ReductionError: If the formula cannot be encoded

    Example:
        >>> out = build_paths_instance(parse_dimacs("p cnf 3 1\\n1 2 3 0\\n"))
        >>> out.instance.weight(out.clause_pipe[1])
        22
    """
    builder = _Builder(cnf)
    instance = builder.instance()
    output = builder.output(instance, crossing_ledger(instance).cr2)
    logger.info(
        "built paths reduction: %d clusters, %d pipes, %d guest edges, K=%d",
        len(instance.host.clusters), len(instance.host.pipes), len(instance.guest.edges), output.k,
    )
    return output


def _arcs(builder: _Builder, denominator: int) -> tuple[list[Pipe], dict[str, tuple[str, str]], dict[str, str]]:
    paths = [builder.variable_path[j] for j in sorted(builder.variable_path)]
    paths += [builder.clause_path[i] for i in sorted(builder.clause_path)]
    count = len(paths)
    spread = denominator * (2 * count + 1)
    pipes: list[Pipe] = []
    edges: dict[str, tuple[str, str]] = {}
    edge_map: dict[str, str] = {}
    for k in range(count):
        tail, head = paths[k][-1], paths[(k + 1) % count][0]
        a, b = builder.vertex_map[tail], builder.vertex_map[head]
        pa, pb = builder.positions[a], builder.positions[b]
        corridor = Fraction(-3 - k)
        bend_a = Point(pa.x + Fraction(2 * k + 1, spread), corridor)
        bend_b = Point(pb.x + Fraction(2 * k + 2, spread), corridor)
        pid, edge = f"arc{k}", f"m{k}"
        pipes.append(Pipe(pid, a, b, (pa, bend_a, bend_b, pb)))
        edges[edge] = (tail, head)
        edge_map[edge] = pid
    return pipes, edges, edge_map


def build_cycle_instance(cnf: CNF) -> ReductionOutput:
    """Encode a 3CNF as a single-cycle instance.

    The paths of the first construction are joined tail to head, variables
    first and clauses after, cyclically. Each joining edge gets its own pipe
    drawn down to a private horizontal corridor below the drawing.

    Raises:
        ReductionError: If the formula cannot be encoded or no arc layout
            avoids degenerate contacts
    """
    builder = _Builder(cnf)
    for denominator in _ARC_DENOMINATORS:
        arcs, edges, edge_map = _arcs(builder, denominator)
        instance = builder.instance(arcs, edges, edge_map)
        try:
            ledger = crossing_ledger(instance)
        except DegenerateDrawingError as e:
            logger.debug("arc layout with denominator %d is degenerate: %s", denominator, e)
            continue
        output = builder.output(instance, ledger.cr2, tuple(edges))
        logger.info("built cycle reduction: %d matching arcs, K=%d", len(arcs), output.k)
        return output
    raise ReductionError("Could not route the matching arcs without degenerate contacts")


def sidecar(output: ReductionOutput) -> dict[str, Any]:
    """JSON-ready description of a reduction: K, cr₂ and provenance."""
    return {
        "K": output.k,
        "cr2": output.cr2,
        "variables": output.cnf.num_vars,
        "clauses": output.cnf.num_clauses,
        "cycle": output.cycle,
        "clause_tables": {
            str(i): {
                "clusters": list(output.clause_clusters[i]),
                "ends": list(output.clause_ends[i]),
                "path": list(output.clause_path[i]),
                "edge": output.clause_edge[i],
                "pipe": output.clause_pipe[i],
            }
            for i in sorted(output.clause_clusters)
        },
        "variable_tables": {
            str(j): {
                "host_path": list(output.host_path[j]),
                "path_length": len(output.variable_path[j]),
                "occurrences": output.cnf.occurrences(j),
            }
            for j in sorted(output.variable_path)
        },
        "gadgets": [
            {
                "variable": g.variable,
                "clause": g.clause,
                "positive": g.positive,
                "a_strand": g.a_strand,
                "a_edges": list(g.a_edges),
                "b_edges": list(g.b_edges),
            }
            for _, g in sorted(output.gadgets.items())
        ],
        "matching": list(output.matching),
    }
