"""Brute-force minimum over all pipe order sets.

The oracle enumerates every combination of per-pipe orders, pipes sorted
by id and orders in lexicographic order, and keeps the first strict
minimum. It is the reference every faster answer is checked against, so it
refuses to run past its budget instead of truncating.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from perturbcross.evaluate import DiskModel
from perturbcross.exceptions import BudgetExceededError
from perturbcross.geometry import crossing_ledger, rotation_at
from perturbcross.model import CrossingLedger, Instance, PipeOrderSet, RotationSystem

logger = logging.getLogger(__name__)

Snapshot = tuple[Instance, CrossingLedger, RotationSystem]

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class OracleResult:
    """Minimum crossing count and the lexicographically first order set reaching it."""

    value: int
    orders: PipeOrderSet
    evaluated: int


class _Search:
    """Enumerates order combinations with per-cluster memoisation."""

    def __init__(self, instance: Instance, rotations: RotationSystem, cr2: int) -> None:
        self.model = DiskModel(instance, rotations)
        self.cr2 = cr2
        self.pipes = sorted(instance.host.pipes)
        self.choices = [
            list(itertools.permutations(sorted(instance.pipe_preimage.get(p, ())))) for p in self.pipes
        ]
        self.clusters = [c for c in instance.host.clusters if self.model.ends.get(c)]
        self.keys = {c: [self.pipes.index(p) for p, _ in self.model.sides[c]] for c in self.clusters}
        self.memo: dict[str, dict[tuple[int, ...], int]] = {c: {} for c in self.clusters}

    def cost(self, picks: Sequence[int]) -> int:
        """cr₂ plus disk crossings for one combination of order indices."""
        total = self.cr2
        for cluster in self.clusters:
            key = tuple(picks[i] for i in self.keys[cluster])
            cached = self.memo[cluster].get(key)
            if cached is None:
                orders = {self.pipes[i]: self.choices[i][picks[i]] for i in self.keys[cluster]}
                cached = self.model.crossings_at(cluster, orders)
                self.memo[cluster][key] = cached
            total += cached
        return total

    def run(self, first: range | None = None) -> tuple[int, tuple[int, ...], int]:
        """Best (value, picks, evaluated) with the first pipe restricted to ``first``."""
        ranges = [range(len(options)) for options in self.choices]
        if first is not None and ranges:
            ranges[0] = first
        best_value: int | None = None
        best_picks: tuple[int, ...] = ()
        evaluated = 0
        for picks in itertools.product(*ranges):
            evaluated += 1
            value = self.cost(picks)
            if best_value is None or value < best_value:
                best_value, best_picks = value, picks
                if value == self.cr2:
                    break
        assert best_value is not None
        return best_value, best_picks, evaluated

    def orders(self, picks: Sequence[int]) -> PipeOrderSet:
        return PipeOrderSet({p: self.choices[i][picks[i]] for i, p in enumerate(self.pipes)})


def _run_batch(args: tuple[Instance, RotationSystem, int, int]) -> tuple[int, tuple[int, ...], int]:
    instance, rotations, cr2, first = args
    return _Search(instance, rotations, cr2).run(range(first, first + 1))


def oracle(
    instance: Instance,
    *,
    rotations: RotationSystem | None = None,
    ledger: CrossingLedger | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> OracleResult:
    """Exact minimum of ``evaluate`` over all pipe order sets.

    Args:
        instance: Instance with guest degrees at most 2
        rotations: Rotation system; computed from the drawing when omitted
        ledger: Crossing ledger; computed from the drawing when omitted
        budget: Largest allowed product of w! over all pipes
        workers: Processes evaluating batches split on the first pipe

    Returns:
        OracleResult with the minimum and its lexicographically first witness

    Raises:
        BudgetExceededError: If the order space is larger than ``budget``

    Example:
        >>> oracle(wound_cycle(6, 3)).value
        1
    """
    size = instance.order_space_size()
    if size > budget:
        raise BudgetExceededError(size, budget)
    if rotations is None:
        rotations = rotation_at(instance.host)
    if ledger is None:
        ledger = crossing_ledger(instance)
    search = _Search(instance, rotations, ledger.cr2)
    logger.debug("oracle enumerating %d order sets over %d pipes", size, len(search.pipes))

    if workers > 1 and search.pipes and len(search.choices[0]) > 1:
        batches = [(instance, rotations, ledger.cr2, i) for i in range(len(search.choices[0]))]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_batch, batches))
        # batches come back in first-pipe order, so the first minimum is the lexicographic one
        value, picks, _ = min(results, key=lambda r: r[0])
        evaluated = sum(r[2] for r in results)
    else:
        value, picks, evaluated = search.run()

    logger.debug("oracle minimum %d after %d evaluations", value, evaluated)
    return OracleResult(value, search.orders(picks), evaluated)


def oracle_invariance_check(
    before: Instance | Snapshot, after: Instance | Snapshot, *, budget: int = DEFAULT_BUDGET
) -> bool:
    """True iff two instances have the same oracle value.

    Either side may be a bare geometric instance or an
    (instance, ledger, rotations) snapshot such as an expansion returns.
    """

    def value(subject: Instance | Snapshot) -> int:
        if isinstance(subject, Instance):
            return oracle(subject, budget=budget).value
        instance, ledger, rotations = subject
        return oracle(instance, rotations=rotations, ledger=ledger, budget=budget).value

    return value(before) == value(after)
