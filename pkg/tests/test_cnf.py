"""Tests for DIMACS formulas and assignments."""

import random

import pytest

from perturbcross import InstanceParseError
from perturbcross.cnf import (
    CNF,
    parse_assignment,
    parse_dimacs,
    planted_3cnf,
    random_3cnf,
    satisfies,
    write_dimacs,
)


def test_parse_with_comments_and_wrapped_clauses():
    """Test comments, clauses spanning lines and a final clause without 0."""
    text = "c a comment\np cnf 4 3\n1 -2\n 3 0 -1 2 4 0\n2 3 -4\n"

    cnf = parse_dimacs(text)

    assert cnf.num_vars == 4
    assert cnf.clauses == ((1, -2, 3), (-1, 2, 4), (2, 3, -4))
    assert cnf.occurrences(4) == [2, 3]


def test_write_then_parse(two_clauses):
    """Test that written DIMACS parses back to the same formula."""
    text = write_dimacs(two_clauses)

    assert text == "p cnf 3 2\n1 2 3 0\n-1 2 3 0\n"
    assert parse_dimacs(text) == two_clauses


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("1 2 3 0\n", "before the 'p cnf' header"),
        ("p cnf 3\n1 2 3 0\n", "Invalid problem line"),
        ("p dnf 3 1\n1 2 3 0\n", "Invalid problem line"),
        ("p cnf 3 1\np cnf 3 1\n", "Second problem line"),
        ("p cnf 3 1\n1 x 3 0\n", "Invalid literal 'x'"),
        ("p cnf 3 1\n1 2 4 0\n", "exceeds the 3 declared"),
        ("p cnf 3 2\n1 2 3 0\n", "declares 2 clauses, found 1"),
        ("c only comments\n", "Missing 'p cnf' header"),
    ],
)
def test_parse_errors(text, message):
    """Test that malformed DIMACS is rejected with a clear message."""
    with pytest.raises(InstanceParseError, match=message):
        parse_dimacs(text)


def test_random_3cnf_shape():
    """Test that random clauses have three distinct variables in range."""
    cnf = random_3cnf(random.Random(1), 6, 40)

    assert cnf.num_clauses == 40
    for clause in cnf.clauses:
        variables = {abs(lit) for lit in clause}
        assert len(variables) == 3
        assert variables <= set(range(1, 7))


def test_planted_3cnf_is_satisfied_by_its_assignment():
    """Test that the hidden assignment satisfies the planted formula."""
    rng = random.Random(5)
    for _ in range(10):
        cnf, planted = planted_3cnf(rng, 5, 20)

        assert satisfies(cnf, planted)


def test_generators_need_three_variables():
    """Test that fewer than three variables is refused."""
    with pytest.raises(ValueError, match="at least 3"):
        random_3cnf(random.Random(0), 2, 1)
    with pytest.raises(ValueError, match="at least 3"):
        planted_3cnf(random.Random(0), 2, 1)


def test_satisfies_treats_missing_variables_as_false():
    """Test that unassigned variables count as false."""
    cnf = CNF(3, ((-1, -2, -3), (1, 2, 3)))

    assert not satisfies(cnf, {})
    assert satisfies(cnf, {2: True})


def test_parse_assignment_formats():
    """Test solver-style 'v' lines, terminating zeros and defaults."""
    text = "c from a solver\nv 1 -2\nv 0\n"

    assert parse_assignment(text, 3) == {1: True, 2: False, 3: False}
    assert parse_assignment("-3 1") == {3: False, 1: True}


def test_parse_assignment_errors():
    """Test conflicting, out-of-range and malformed literals."""
    with pytest.raises(InstanceParseError, match="assigned both ways"):
        parse_assignment("1 -1")
    with pytest.raises(InstanceParseError, match="exceeds 3"):
        parse_assignment("4", 3)
    with pytest.raises(InstanceParseError, match="Invalid literal"):
        parse_assignment("1 true")
