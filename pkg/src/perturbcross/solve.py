"""Polynomial-time crossing number of a spur-free cycle perturbation.

The solver expands every cluster once, then keeps expanding safe pipes
that touch a cluster of degree at least 3. When none is left the host is
a cycle of k pipes, all carrying the same w strands, and the answer is
cr₂ + w − 1.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from perturbcross.config import Settings
from perturbcross.exceptions import (
    GuestNotCycleError,
    InstanceValidationError,
    SolverInvariantError,
    SpurPresentError,
)
from perturbcross.expand import ExpansionState, SafetyFlags, weights_partition
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import Instance, Shape, validate
from perturbcross.normalize import prune

__all__ = [
    "SolveTrace",
    "TraceStep",
    "find_safe_expandable_pipe",
    "loop_exit_walk",
    "solve",
    "weights_partition",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    """One expansion applied by the solver."""

    kind: str
    target: str
    potential_before: int
    potential_after: int
    cr2: int


@dataclass
class SolveTrace:
    """Record of a solver run.

    Attributes:
        steps: Expansions in the order they were applied
        cycle_length: Number of pipes of the final cycle host
        weight: Common weight of the final pipes
        cr2: Weighted pipe crossings of the final instance
        charged_work: Members moved while splitting pipe preimages
    """

    steps: list[TraceStep] = field(default_factory=list)
    cycle_length: int = 0
    weight: int = 0
    cr2: int = 0
    charged_work: int = 0

    @property
    def result(self) -> int:
        return self.cr2 + self.weight - 1

    def to_text(self) -> str:
        """Structured text, one line per step plus a summary line."""
        lines = [
            f"{s.kind} {s.target} phi {s.potential_before}->{s.potential_after} cr2 {s.cr2}"
            for s in self.steps
        ]
        lines.append(
            f"final cycle {self.cycle_length} weight {self.weight} cr2 {self.cr2} cr {self.result}"
        )
        return "\n".join(lines) + "\n"


def find_safe_expandable_pipe(instance: Instance, flags: SafetyFlags) -> str | None:
    """Smallest-id safe pipe with an endpoint of degree at least 3.

    Returns None exactly when no such pipe exists, which for a spur-free
    cycle guest means the host is a cycle.
    """
    host = instance.host
    for pid in sorted(host.pipes):
        pipe = host.pipes[pid]
        if flags.safe.get(pid) and max(host.degree(pipe.u), host.degree(pipe.v)) >= 3:
            return pid
    return None


def loop_exit_walk(state: ExpansionState) -> str | None:
    """Walk from a high-degree cluster along base pipes looking for a safe one.

    Starting at the first cluster of degree at least 3, repeatedly leave
    through a pipe the current cluster is a base of. Reaching a cluster
    that is also a base of that pipe yields an expandable pipe. Returns
    None when the host has no cluster of degree 3 or the walk gets stuck.
    """
    start = next((c for c in sorted(state.rotation) if state.degree(c) >= 3), None)
    if start is None:
        return None
    visited = {start}
    current, arrived_by = start, None
    while True:
        exits = [p for p in state.rotation[current] if p != arrived_by and state.is_base(current, p)]
        if not exits:
            return None
        pipe = exits[0]
        following = state.other_end(pipe, current)
        if state.is_expandable(pipe):
            return pipe
        if following in visited:
            return None
        visited.add(following)
        current, arrived_by = following, pipe


def _check_input(instance: Instance) -> None:
    report = validate(instance)
    if report.violations:
        raise InstanceValidationError(
            f"Instance is not admissible: {report.violations[0]}", report.violations
        )
    if instance.guest.shape != Shape.CYCLE:
        raise GuestNotCycleError(f"Guest graph is {instance.guest.shape.value}, not a cycle")
    if report.spurs:
        raise SpurPresentError(report.spurs)


def solve(instance: Instance, settings: Settings | None = None) -> tuple[int, SolveTrace]:
    """Crossing number of the perturbation of a spur-free cycle.

    Args:
        instance: Admissible geometric instance whose guest is a cycle
        settings: Solver knobs (crossing method, weight charging, loop-exit check)

    Returns:
        (cr, trace)

    Raises:
        InstanceValidationError: If the instance violates a model invariant
        GuestNotCycleError: If the guest is not a single cycle
        SpurPresentError: If some guest vertex is a spur
        DegenerateDrawingError: If pipes touch or overlap
        SolverInvariantError: If an internal soundness check fails

    Example:
        >>> solve(wound_cycle(6, 3))[0]
        1
    """
    settings = settings or Settings()
    _check_input(instance)
    instance = prune(instance)
    ledger = crossing_ledger(instance, settings.crossing_method)
    rotations = rotation_at(instance.host)
    state = ExpansionState.from_instance(instance, ledger, rotations, charging=settings.weight_charging)
    trace = SolveTrace()

    for cluster in sorted(instance.host.clusters):
        before = state.potential
        state.cluster_expansion(cluster)
        trace.steps.append(TraceStep("cluster", cluster, before, state.potential, state.cr2))

    worklist = deque(sorted(state.pipe_ends))
    while worklist:
        pipe = worklist.popleft()
        if not state.is_expandable(pipe):
            continue
        before = state.potential
        created = state.pipe_expansion(pipe)
        after = state.potential
        if not 0 <= after < before:
            raise SolverInvariantError(f"Potential went from {before} to {after} expanding '{pipe}'")
        trace.steps.append(TraceStep("pipe", pipe, before, after, state.cr2))
        for cluster in created:
            worklist.extend(state.rotation[cluster])

    if settings.check_loop_exit:
        missed = loop_exit_walk(state)
        if missed is not None:
            raise SolverInvariantError(f"Loop exited although pipe '{missed}' is expandable")
    if not state.is_cycle_host():
        raise SolverInvariantError("Loop exited but the host is not a cycle")
    weights = {state.weight(p) for p in state.pipe_ends}
    if len(weights) != 1:
        raise SolverInvariantError(f"Final pipes carry unequal weights {sorted(weights)}")

    trace.cycle_length = len(state.pipe_ends)
    trace.weight = weights.pop()
    trace.cr2 = state.cr2
    trace.charged_work = state.charged_work
    logger.info(
        "solved: %d steps, final cycle of %d pipes with weight %d, cr2=%d, cr=%d",
        len(trace.steps), trace.cycle_length, trace.weight, trace.cr2, trace.result,
    )
    return trace.result, trace
