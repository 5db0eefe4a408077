"""3CNF formulas: DIMACS input/output, generators and assignments.

Literals follow DIMACS: variable ``j`` is the integer ``j``, its negation
``-j``; variables are numbered from 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from perturbcross.exceptions import InstanceParseError

Clause = tuple[int, ...]
Assignment = dict[int, bool]


@dataclass(frozen=True)
class CNF:
    """A formula in conjunctive normal form.

    Attributes:
        num_vars: Number of variables declared by the header
        clauses: Clauses as tuples of nonzero literals
    """

    num_vars: int
    clauses: tuple[Clause, ...]

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def occurrences(self, variable: int) -> list[int]:
        """1-based indices of the clauses mentioning ``variable``."""
        return [i for i, clause in enumerate(self.clauses, start=1) if any(abs(lit) == variable for lit in clause)]


def parse_dimacs(text: str) -> CNF:
    """Parse DIMACS CNF text.

    ``c`` lines are comments, the ``p cnf <vars> <clauses>`` header is
    required, and a clause runs until its terminating 0, possibly across
    lines. A final clause without its 0 is accepted.

    Raises:
        InstanceParseError: On a missing or malformed header, bad tokens,
            out-of-range literals or a clause count that does not match

    Example:
        >>> parse_dimacs("p cnf 3 1\\n1 -2 3 0\\n").clauses
        ((1, -2, 3),)
    """
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    current: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise InstanceParseError("Second problem line", number)
            if len(parts) != 4 or parts[1] != "cnf":
                raise InstanceParseError(f"Invalid problem line: {line}", number)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as e:
                raise InstanceParseError(f"Invalid problem line: {line}", number) from e
            continue
        if header is None:
            raise InstanceParseError("Clause before the 'p cnf' header", number)
        for token in line.split():
            try:
                literal = int(token)
            except ValueError as e:
                raise InstanceParseError(f"Invalid literal '{token}'", number) from e
            if literal == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(literal) > header[0]:
                raise InstanceParseError(f"Literal {literal} exceeds the {header[0]} declared variables", number)
            else:
                current.append(literal)
    if header is None:
        raise InstanceParseError("Missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise InstanceParseError(f"Header declares {header[1]} clauses, found {len(clauses)}")
    return CNF(header[0], tuple(clauses))


def write_dimacs(cnf: CNF) -> str:
    """DIMACS text for a formula, one clause per line."""
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def _clause(rng: random.Random, num_vars: int) -> Clause:
    variables = rng.sample(range(1, num_vars + 1), 3)
    return tuple(v if rng.random() < 0.5 else -v for v in variables)


def random_3cnf(rng: random.Random, num_vars: int, num_clauses: int) -> CNF:
    """Uniform random 3CNF; each clause has 3 distinct variables."""
    if num_vars < 3:
        raise ValueError(f"Need at least 3 variables, got {num_vars}")
    return CNF(num_vars, tuple(_clause(rng, num_vars) for _ in range(num_clauses)))


def planted_3cnf(rng: random.Random, num_vars: int, num_clauses: int) -> tuple[CNF, Assignment]:
    """Random 3CNF with a hidden satisfying assignment.

    Clauses falsified by the planted assignment are redrawn.
    """
    if num_vars < 3:
        raise ValueError(f"Need at least 3 variables, got {num_vars}")
    planted = {v: rng.random() < 0.5 for v in range(1, num_vars + 1)}
    clauses: list[Clause] = []
    while len(clauses) < num_clauses:
        clause = _clause(rng, num_vars)
        if satisfies_clause(clause, planted):
            clauses.append(clause)
    return CNF(num_vars, tuple(clauses)), planted


def satisfies_clause(clause: Clause, assignment: Assignment) -> bool:
    return any(assignment.get(abs(lit), False) == (lit > 0) for lit in clause)


def satisfies(cnf: CNF, assignment: Assignment) -> bool:
    """True iff every clause has a true literal (unassigned variables are false)."""
    return all(satisfies_clause(clause, assignment) for clause in cnf.clauses)


def parse_assignment(text: str, num_vars: int | None = None) -> Assignment:
    """Parse signed literals such as ``1 -2 3`` into an assignment.

    A leading ``v`` on a line and a terminating 0 are accepted, as are
    ``c`` comment lines. Variables not listed are false.

    Raises:
        InstanceParseError: On bad tokens, a variable listed with both
            signs, or a variable above ``num_vars``
    """
    assignment: Assignment = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "v":
            tokens = tokens[1:]
        for token in tokens:
            try:
                literal = int(token)
            except ValueError as e:
                raise InstanceParseError(f"Invalid literal '{token}'", number) from e
            if literal == 0:
                continue
            variable = abs(literal)
            if num_vars is not None and variable > num_vars:
                raise InstanceParseError(f"Variable {variable} exceeds {num_vars}", number)
            if assignment.get(variable, literal > 0) != (literal > 0):
                raise InstanceParseError(f"Variable {variable} assigned both ways", number)
            assignment[variable] = literal > 0
    if num_vars is not None:
        for variable in range(1, num_vars + 1):
            assignment.setdefault(variable, False)
    return assignment
