"""Pipe orders realising K crossings for a satisfying assignment.

Strands are stacked bottom to top as seen travelling west to east. Away
from the clauses each variable keeps P2 between P1 and P3, with P1 on top
when the variable is true. On a clause pipe the three variables form
blocks ordered by row; inside a block the strand that is on top carries
its gadget above P2 and the other strand's gadget sits below. The clause
edge is then slotted where the clause path crosses the fewest strands.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass

from perturbcross.cnf import Assignment, satisfies
from perturbcross.evaluate import DiskModel, evaluate, interleavings_between
from perturbcross.exceptions import WitnessError
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import Instance, PipeOrderSet
from perturbcross.reduce import A_PASSES, B_PASSES, CLAUSE_CROSSINGS, ReductionOutput, pipe_name

logger = logging.getLogger(__name__)

DESCENDING = "descending"  # first pass on top
ASCENDING = "ascending"


def _strand_rank(on_top: bool) -> dict[str, int]:
    return {"P3": 0, "P2": 1, "P1": 2} if on_top else {"P1": 0, "P2": 1, "P3": 2}


def _west_to_east(instance: Instance, pipe: str, stack: list[str]) -> tuple[str, ...]:
    """Convert a bottom-to-top stack into the pipe's canonical order."""
    p = instance.host.pipes[pipe]
    west = p.u if instance.host.position(p.u).x <= instance.host.position(p.v).x else p.v
    return tuple(stack) if p.tail == west else tuple(reversed(stack))


class _Layout:
    """Orders of every pipe, with the clause pipes rebuilt on demand."""

    def __init__(self, output: ReductionOutput, assignment: Assignment) -> None:
        self.output = output
        self.assignment = assignment
        self.instance = output.instance
        self.model = DiskModel(self.instance, rotation_at(self.instance.host))
        self.variable_of: dict[str, int] = {}
        for j, path in output.variable_path.items():
            for k in range(len(path) - 1):
                self.variable_of[f"x{j}.e{k}"] = j
        self.passes: dict[str, int] = {}
        for gadget in output.gadgets.values():
            self.passes.update(zip(gadget.a_edges, A_PASSES))
            self.passes.update(zip(gadget.b_edges, B_PASSES))

        self.orders: dict[str, tuple[str, ...]] = {}
        clause_pipes = {
            pipe_name(a, b)
            for u in output.clause_clusters.values()
            for a, b in zip(u, u[1:])
        }
        for pipe, edges in self.instance.pipe_preimage.items():
            if pipe in clause_pipes:
                continue
            stack = sorted(edges, key=self._strand_key)
            self.orders[pipe] = _west_to_east(self.instance, pipe, stack) if len(stack) > 1 else tuple(stack)

    def _strand_key(self, edge: str) -> int:
        j = self.variable_of.get(edge)
        if j is None:
            return 0
        return _strand_rank(self.assignment.get(j, False))[self.output.strand[edge]]

    def clause_stacks(self, clause: int, shapes: Mapping[tuple[int, bool], str], slot: int) -> dict[str, list[str]]:
        """Bottom-to-top stacks of the three clause pipes.

        ``shapes`` is keyed by (variable, is the top group); ``slot`` is the
        number of variable edges below the clause edge on the middle pipe.
        """
        u = self.output.clause_clusters[clause]
        stacks: dict[str, list[str]] = {}
        for a, b in zip(u, u[1:]):
            pipe = pipe_name(a, b)
            preimage = set(self.instance.pipe_preimage[pipe])
            stack: list[str] = []
            for j in self.output.clause_variables(clause):
                top, bottom = ("P1", "P3") if self.assignment.get(j, False) else ("P3", "P1")
                mine = [e for e in preimage if self.variable_of.get(e) == j]
                stack += self._layers(mine, bottom, shapes[(j, False)])
                stack += [e for e in mine if self.output.strand[e] == "P2"]
                stack += self._layers(mine, top, shapes[(j, True)])
            if pipe == self.output.clause_pipe[clause]:
                stack.insert(slot, self.output.clause_edge[clause])
            stacks[pipe] = stack
        return stacks

    def _layers(self, edges: list[str], strand: str, shape: str) -> list[str]:
        group = [e for e in edges if self.output.strand[e] == strand]
        return sorted(group, key=lambda e: self.passes[e], reverse=shape == DESCENDING)

    def apply(self, stacks: Mapping[str, list[str]]) -> None:
        for pipe, stack in stacks.items():
            self.orders[pipe] = _west_to_east(self.instance, pipe, stack)

    def clause_count(self, clause: int) -> int:
        return sum(self.model.crossings_at(c, self.orders) for c in self.output.clause_clusters[clause])


def _search_clause(layout: _Layout, clause: int) -> int:
    """Bring one clause down to its crossing floor.

    A greedy pass runs first: best slot, one flip per gadget layer, best
    slot again. When that misses the floor every combination of layer
    shapes and slots is tried, stopping at the first that reaches it.
    """
    variables = layout.output.clause_variables(clause)
    keys = [(j, top) for j in variables for top in (False, True)]
    shapes = dict.fromkeys(keys, DESCENDING)
    middle = layout.output.clause_pipe[clause]
    slots = len(layout.instance.pipe_preimage[middle])

    def cost(slot: int) -> int:
        layout.apply(layout.clause_stacks(clause, shapes, slot))
        return layout.clause_count(clause)

    def best_slot() -> tuple[int, int]:
        return min((cost(s), s) for s in range(slots))

    value, slot = best_slot()
    for key in keys:
        shapes[key] = ASCENDING
        trial = cost(slot)
        if trial < value:
            value = trial
        else:
            shapes[key] = DESCENDING
    value, slot = best_slot()

    if value != CLAUSE_CROSSINGS:
        logger.debug("clause %d: greedy pass stopped at %d, enumerating all layer shapes", clause, value)
        best = (value, slot, dict(shapes))
        for combination in itertools.product((DESCENDING, ASCENDING), repeat=len(keys)):
            shapes.update(zip(keys, combination))
            trial, trial_slot = best_slot()
            if trial < best[0]:
                best = (trial, trial_slot, dict(shapes))
            if trial == CLAUSE_CROSSINGS:
                break
        value, slot, found = best
        shapes.update(found)

    layout.apply(layout.clause_stacks(clause, shapes, slot))
    logger.debug("clause %d: %d crossings with the clause edge at slot %d", clause, value, slot)
    return value


def build_witness(output: ReductionOutput, assignment: Assignment) -> PipeOrderSet:
    """Pipe orders of a perturbation with exactly K crossings.

    Args:
        output: A reduction built from the formula
        assignment: Satisfying truth assignment (unlisted variables are false)

    Returns:
        PipeOrderSet whose evaluation equals ``output.k``

    Raises:
        WitnessError: If the assignment does not satisfy the formula, some
            clause cannot be brought down to 13 crossings, or the finished
            orders do not evaluate to K
    """
    if not satisfies(output.cnf, assignment):
        raise WitnessError("Assignment does not satisfy the formula")
    layout = _Layout(output, assignment)
    for clause in sorted(output.clause_clusters):
        value = _search_clause(layout, clause)
        if value != CLAUSE_CROSSINGS:
            raise WitnessError(f"Clause {clause} needs {value} crossings, expected {CLAUSE_CROSSINGS}")
    orders = PipeOrderSet(dict(layout.orders))
    total = evaluate(output.instance, orders, layout.model.rotations, crossing_ledger(output.instance)).total
    if total != output.k:
        raise WitnessError(f"Witness evaluates to {total} crossings, expected K = {output.k}")
    return orders


@dataclass(frozen=True)
class WitnessReport:
    """Where the crossings of a witness are.

    Attributes:
        total: Crossings of the whole perturbation
        per_clause: Clause index mapped to the crossings at its four clusters
        breakdown: Clause index mapped to {variable: crossings between the
            clause path and that variable's path}
    """

    total: int
    per_clause: dict[int, int]
    breakdown: dict[int, dict[int, int]]


def explain_witness(output: ReductionOutput, orders: PipeOrderSet) -> WitnessReport:
    """Per-clause and per-variable crossing counts of an order set."""
    instance = output.instance
    rotations = rotation_at(instance.host)
    model = DiskModel(instance, rotations)
    per_clause = {
        i: sum(model.crossings_at(c, orders.orders) for c in clusters)
        for i, clusters in output.clause_clusters.items()
    }
    breakdown: dict[int, dict[int, int]] = {}
    for i, clusters in output.clause_clusters.items():
        clause_vertices = set(output.clause_path[i])
        counts = {j: 0 for j in output.clause_variables(i)}
        for cluster in clusters[1:3]:
            chords = model.chords_at(cluster, orders.orders)
            path_chords = [c for c in chords if c.vertex in clause_vertices]
            for j in counts:
                prefix = f"x{j}."
                counts[j] += interleavings_between(path_chords, [c for c in chords if c.vertex.startswith(prefix)])
        breakdown[i] = counts
    total = evaluate(instance, orders, rotations, crossing_ledger(instance)).total
    return WitnessReport(total, per_clause, breakdown)
