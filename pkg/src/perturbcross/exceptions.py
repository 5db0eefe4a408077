"""Custom exceptions for perturbcross.

Every failure the library reports on purpose is a subclass of
PerturbCrossError, so callers (and the CLI) can tell data problems apart
from programming errors.
"""

from collections.abc import Sequence


class PerturbCrossError(Exception):
    """Base exception for all perturbcross errors.

    All perturbcross exceptions inherit from this base class.
    """
    pass


class InstanceParseError(PerturbCrossError):
    """Text input could not be parsed.

    This error occurs when:
    - A line of an instance, raw-drawing, order or assignment file is malformed
    - An id is defined twice
    - A line references an id that was never defined
    - A DIMACS file has a bad header or an unterminated clause

    The 1-based line number is kept in ``line`` when it is known.

    Example:
        >>> from perturbcross import parse_instance
        >>> try:
        ...     parse_instance("pipe p a b")
        ... except InstanceParseError as e:
        ...     print(e.line)
        1
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstanceValidationError(PerturbCrossError):
    """Instance is not admissible for the requested operation.

    This error occurs when:
    - An edge maps to a pipe whose endpoints differ from its vertices' clusters
    - Slot conservation fails at a cluster
    - A pipe polyline does not start or end at its clusters

    The full violation list is kept in ``violations``.
    """

    def __init__(self, message: str, violations: Sequence[str] = ()) -> None:
        self.violations = list(violations)
        super().__init__(message)


class DegenerateDrawingError(PerturbCrossError):
    """The host drawing is not in general position.

    This error occurs when:
    - Two distinct pipes touch or overlap instead of crossing properly
    - A pipe polyline intersects itself
    - An input segment has zero length
    """
    pass


class DegenerateRotationError(PerturbCrossError):
    """Two pipes leave a cluster in the same initial direction.

    Normalization merges such pipes, so this only shows up on
    hand-written instances.
    """
    pass


class SpurPresentError(PerturbCrossError):
    """The guest has a spur where the solver needs a spur-free map.

    The offending guest vertex ids are kept in ``vertices``.

    Example:
        >>> from perturbcross import build_instance, solve
        >>> from perturbcross.model import Point
        >>> positions = {"a": Point.of(0, 0), "b": Point.of(3, 0), "c": Point.of(1, 2)}
        >>> pipes = [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")]
        >>> walk = "abacbc"
        >>> vertex_map = {f"g{i}": walk[i] for i in range(6)}
        >>> edges = {f"e{i}": (f"g{i}", f"g{(i + 1) % 6}") for i in range(6)}
        >>> try:
        ...     solve(build_instance(positions, pipes, vertex_map, edges))
        ... except SpurPresentError as e:
        ...     print(e.vertices)
        ['g1', 'g4']
    """

    def __init__(self, vertices: Sequence[str]) -> None:
        self.vertices = list(vertices)
        shown = ", ".join(self.vertices[:10])
        more = "" if len(self.vertices) <= 10 else f" (+{len(self.vertices) - 10} more)"
        super().__init__(f"Spurs at guest vertices: {shown}{more}")


class GuestNotCycleError(PerturbCrossError):
    """The guest graph is not a single cycle."""
    pass


class UnsafePipeError(PerturbCrossError):
    """Pipe expansion was requested on a pipe that is not safe."""
    pass


class OrderSetError(PerturbCrossError):
    """A pipe order set does not match the preimages of the pipes.

    This error occurs when:
    - A pipe has no order, or an order names a pipe that does not exist
    - An order is not a permutation of exactly the edges mapped to its pipe
    """
    pass


class BudgetExceededError(PerturbCrossError):
    """The brute-force oracle would enumerate more order sets than allowed.

    ``size`` is the product of w! over all pipes, ``budget`` the limit in
    force. The oracle never truncates silently.
    """

    def __init__(self, size: int, budget: int) -> None:
        self.size = size
        self.budget = budget
        super().__init__(f"Order space has {size} combinations, budget is {budget}")


class ReductionError(PerturbCrossError):
    """A CNF formula cannot be turned into a hardness instance.

    This error occurs when:
    - A clause does not have exactly three distinct variables
    - The formula has no clauses
    - Matching arcs cannot be routed without degeneracies
    """
    pass


class WitnessError(PerturbCrossError):
    """A witness order set could not be built.

    This error occurs when:
    - The assignment does not satisfy the formula
    - The local search misses 13 crossings in some clause neighbourhood
    """
    pass


class SolverInvariantError(PerturbCrossError):
    """An internal soundness check of the solver failed.

    This always indicates a bug, never bad input. The CLI maps it to
    exit code 70.
    """
    pass


class ConfigError(PerturbCrossError):
    """Configuration error.

    This error occurs when:
    - The config file is corrupted
    - An unknown option name is used
    - An option has a value of the wrong type
    """
    pass
