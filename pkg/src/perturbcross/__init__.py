"""perturbcross: crossing numbers of perturbations of cycles.

A drawing of a cycle whose edges run along the pipes of a host drawing can
be perturbed into a nearby drawing; this package computes the least number
of crossings such a perturbation needs, checks answers against a
brute-force oracle, and builds the hard instances of the general problem
from 3CNF formulas.

Example:
    >>> from perturbcross import solve, wound_cycle
    >>> solve(wound_cycle(6, 3))[0]
    1
"""

__version__ = "0.1.0"

# Instances and file formats
from perturbcross.model import (
    CrossingLedger,
    GuestGraph,
    HostGraph,
    Instance,
    PipeOrderSet,
    build_instance,
    random_cycle_instance,
    validate,
    wound_cycle,
)
from perturbcross.formats import parse_instance, parse_orders, serialize_instance, serialize_orders
from perturbcross.normalize import detect_forks, detect_spurs, normalize

# Geometry
from perturbcross.geometry import crossing_ledger, rotation_at

# Algorithm and checks
from perturbcross.expand import cluster_expansion, pipe_expansion
from perturbcross.solve import solve
from perturbcross.evaluate import check_certificate, evaluate
from perturbcross.oracle import oracle

# Hardness construction
from perturbcross.cnf import CNF, parse_dimacs
from perturbcross.reduce import build_cycle_instance, build_paths_instance
from perturbcross.witness import build_witness

# Configuration
from perturbcross.config import Settings, load_config

# Exceptions
from perturbcross.exceptions import (
    BudgetExceededError,
    ConfigError,
    DegenerateDrawingError,
    DegenerateRotationError,
    GuestNotCycleError,
    InstanceParseError,
    InstanceValidationError,
    OrderSetError,
    PerturbCrossError,
    ReductionError,
    SolverInvariantError,
    SpurPresentError,
    UnsafePipeError,
    WitnessError,
)

__all__ = [
    "CrossingLedger",
    "GuestGraph",
    "HostGraph",
    "Instance",
    "PipeOrderSet",
    "build_instance",
    "random_cycle_instance",
    "validate",
    "wound_cycle",
    "parse_instance",
    "parse_orders",
    "serialize_instance",
    "serialize_orders",
    "detect_forks",
    "detect_spurs",
    "normalize",
    "crossing_ledger",
    "rotation_at",
    "cluster_expansion",
    "pipe_expansion",
    "solve",
    "check_certificate",
    "evaluate",
    "oracle",
    "CNF",
    "parse_dimacs",
    "build_cycle_instance",
    "build_paths_instance",
    "build_witness",
    "Settings",
    "load_config",
    "BudgetExceededError",
    "ConfigError",
    "DegenerateDrawingError",
    "DegenerateRotationError",
    "GuestNotCycleError",
    "InstanceParseError",
    "InstanceValidationError",
    "OrderSetError",
    "PerturbCrossError",
    "ReductionError",
    "SolverInvariantError",
    "SpurPresentError",
    "UnsafePipeError",
    "WitnessError",
    "__version__",
]
