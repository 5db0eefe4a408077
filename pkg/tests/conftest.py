"""Shared fixtures: small instances and formulas used across the tests."""

import random

import pytest

from perturbcross.cnf import CNF
from perturbcross.model import Instance, wound_cycle


@pytest.fixture
def tri6() -> Instance:
    """C6 wound twice around a triangle (crossing number 1)."""
    return wound_cycle(6, 3)


@pytest.fixture
def identity_c3() -> Instance:
    """C3 drawn exactly on a triangle (crossing number 0)."""
    return wound_cycle(3, 3)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240517)


@pytest.fixture
def one_clause() -> CNF:
    """(x1 ∨ x2 ∨ x3)."""
    return CNF(3, ((1, 2, 3),))


@pytest.fixture
def two_clauses() -> CNF:
    """(x1 ∨ x2 ∨ x3) ∧ (¬x1 ∨ x2 ∨ x3)."""
    return CNF(3, ((1, 2, 3), (-1, 2, 3)))


TRI6_TEXT = """\
# C6 wound twice around a triangle
cluster c0 0 0
cluster c1 1 1
cluster c2 2 4
pipe p0 c0 c1
pipe p1 c1 c2
pipe p2 c2 c0
vertex g0
vertex g1
vertex g2
vertex g3
vertex g4
vertex g5
edge e0 g0 g1
edge e1 g1 g2
edge e2 g2 g3
edge e3 g3 g4
edge e4 g4 g5
edge e5 g5 g0
mapv g0 c0
mapv g1 c1
mapv g2 c2
mapv g3 c0
mapv g4 c1
mapv g5 c2
mape e0 p0
mape e1 p1
mape e2 p2
mape e3 p0
mape e4 p1
mape e5 p2
"""


@pytest.fixture
def tri6_text() -> str:
    return TRI6_TEXT


@pytest.fixture
def tri6_file(tmp_path):
    path = tmp_path / "tri6.inst"
    path.write_text(TRI6_TEXT)
    return path
