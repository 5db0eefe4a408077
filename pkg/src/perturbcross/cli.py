"""Command-line interface.

Every subcommand reads files, calls one library function and prints its
result, so the output on stdout matches a direct library call. Logging goes
to stderr.

Exit codes:
    0: success
    2: the input data was rejected (parse, validation or solver refusal)
    64: bad command-line usage
    70: an internal invariant check failed
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

from perturbcross import __version__
from perturbcross.cnf import parse_assignment, parse_dimacs
from perturbcross.config import Settings, load_config
from perturbcross.evaluate import evaluate
from perturbcross.exceptions import PerturbCrossError, SolverInvariantError
from perturbcross.formats import (
    parse_instance,
    parse_orders,
    parse_raw_drawing,
    serialize_instance,
    serialize_orders,
)
from perturbcross.geometry import crossing_ledger
from perturbcross.model import validate
from perturbcross.normalize import detect_forks, detect_spurs, normalize
from perturbcross.oracle import oracle
from perturbcross.reduce import ReductionOutput, build_cycle_instance, build_paths_instance, sidecar
from perturbcross.render import render_svg
from perturbcross.solve import solve
from perturbcross.witness import build_witness, explain_witness

logger = logging.getLogger(__name__)

EXIT_DATA = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)


def _cmd_normalize(args: argparse.Namespace, settings: Settings) -> None:
    raw = parse_raw_drawing(_read(args.drawing))
    forks = detect_forks(raw)
    instance = normalize(raw)
    _write(args.output, serialize_instance(instance))
    spurs = detect_spurs(instance)
    print(f"clusters = {len(instance.host.clusters)}")
    print(f"pipes = {len(instance.host.pipes)}")
    print(f"spurs = {' '.join(spurs) if spurs else '-'}")
    print(f"forks = {' '.join(f'{v}@{e}' for v, e in forks) if forks else '-'}")


def _cmd_solve(args: argparse.Namespace, settings: Settings) -> None:
    instance = parse_instance(_read(args.instance))
    value, trace = solve(instance, settings)
    if args.trace:
        sys.stdout.write(trace.to_text())
    print(f"cr = {value}")


def _cmd_eval(args: argparse.Namespace, settings: Settings) -> None:
    instance = parse_instance(_read(args.instance))
    orders = parse_orders(_read(args.orders))
    result = evaluate(instance, orders, ledger=crossing_ledger(instance, settings.crossing_method))
    if args.per_cluster:
        for cluster in sorted(result.per_cluster):
            print(f"{cluster} {result.per_cluster[cluster]}")
        print(f"cr2 = {result.cr2}")
    print(f"total = {result.total}")


def _cmd_oracle(args: argparse.Namespace, settings: Settings) -> None:
    instance = parse_instance(_read(args.instance))
    result = oracle(
        instance,
        ledger=crossing_ledger(instance, settings.crossing_method),
        budget=settings.oracle_budget,
        workers=settings.oracle_workers,
    )
    if args.output:
        _write(args.output, serialize_orders(result.orders))
    print(f"min = {result.value}")


def _reduction(path: str, cycle: bool) -> ReductionOutput:
    cnf = parse_dimacs(_read(path))
    return build_cycle_instance(cnf) if cycle else build_paths_instance(cnf)


def _cmd_reduce(args: argparse.Namespace, settings: Settings) -> None:
    output = _reduction(args.cnf, args.cycle)
    _write(args.output, serialize_instance(output.instance))
    _write(f"{args.output}.json", json.dumps(sidecar(output), indent=2, sort_keys=True) + "\n")
    print(f"cr2 = {output.cr2}")
    print(f"K = {output.k}")


def _cmd_witness(args: argparse.Namespace, settings: Settings) -> None:
    output = _reduction(args.cnf, args.cycle)
    assignment = parse_assignment(_read(args.assignment), output.cnf.num_vars)
    orders = build_witness(output, assignment)
    _write(args.output, serialize_orders(orders))
    report = explain_witness(output, orders)
    if args.breakdown:
        for clause in sorted(report.breakdown):
            parts = " ".join(f"x{j}:{n}" for j, n in sorted(report.breakdown[clause].items()))
            print(f"clause {clause} {report.per_clause[clause]} {parts}")
    print(f"total = {report.total}")
    print(f"K = {output.k}")


def _cmd_render(args: argparse.Namespace, settings: Settings) -> None:
    instance = parse_instance(_read(args.instance))
    orders = parse_orders(_read(args.orders)) if args.orders else None
    _write(args.output, render_svg(instance, orders))


def _cmd_info(args: argparse.Namespace, settings: Settings) -> None:
    instance = parse_instance(_read(args.instance))
    report = validate(instance)
    print(f"shape = {instance.guest.shape.value}")
    print(f"vertices = {len(instance.guest.vertices)}")
    print(f"edges = {len(instance.guest.edges)}")
    print(f"clusters = {len(instance.host.clusters)}")
    print(f"pipes = {len(instance.host.pipes)}")
    print(f"admissible = {'yes' if report.admissible else 'no'}")
    for violation in report.violations:
        print(f"violation {violation}")
    print(f"spurs = {' '.join(report.spurs) if report.spurs else '-'}")
    print(f"forks = {' '.join(f'{v}@{p}' for v, p in report.forks) if report.forks else '-'}")
    if report.admissible and instance.host.is_geometric:
        ledger = crossing_ledger(instance, settings.crossing_method)
        for pipe in sorted(ledger.w):
            print(f"weight {pipe} {ledger.w[pipe]}")
        print(f"cr2 = {ledger.cr2}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perturbcross", description="Crossing numbers of cycle perturbations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")
    parser.add_argument("--naive", action="store_true", help="use the all-pairs crossing search")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", help="turn a raw drawing into an instance")
    p.add_argument("drawing")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_normalize)

    p = sub.add_parser("solve", help="crossing number of a spur-free cycle instance")
    p.add_argument("instance")
    p.add_argument("--trace", action="store_true", help="print every expansion step")
    p.add_argument("--charging", action="store_true", help="charge pipe splits to the moved strands")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("eval", help="crossings of the perturbation given by pipe orders")
    p.add_argument("instance")
    p.add_argument("--orders", required=True)
    p.add_argument("--per-cluster", action="store_true")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("oracle", help="brute-force minimum over all pipe orders")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, help="largest allowed order space")
    p.add_argument("--workers", type=int, help="parallel processes")
    p.add_argument("-o", "--output", help="write the minimising orders here")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("reduce", help="build the instance of a 3CNF formula")
    p.add_argument("cnf")
    p.add_argument("--cycle", action="store_true", help="close the paths into one cycle")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("witness", help="pipe orders with K crossings for a satisfying assignment")
    p.add_argument("cnf")
    p.add_argument("--assignment", required=True)
    p.add_argument("--cycle", action="store_true")
    p.add_argument("--breakdown", action="store_true", help="print crossings per clause and variable")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("render", help="draw an instance as SVG")
    p.add_argument("instance")
    p.add_argument("--orders")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_render)

    p = sub.add_parser("info", help="validation report, weights and cr2")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_info)
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = load_config()
    overrides: dict[str, object] = {}
    if args.naive:
        overrides["crossing_method"] = "naive"
    if getattr(args, "budget", None) is not None:
        overrides["oracle_budget"] = args.budget
    if getattr(args, "workers", None) is not None:
        overrides["oracle_workers"] = args.workers
    if getattr(args, "charging", False):
        overrides["weight_charging"] = True
    return dataclasses.replace(settings, **overrides)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help, --version and usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    handler: Callable[[argparse.Namespace, Settings], None] = args.handler
    try:
        handler(args, _settings(args))
    except SolverInvariantError as e:
        print(f"perturbcross: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (PerturbCrossError, OSError, ValueError) as e:
        print(f"perturbcross: {e}", file=sys.stderr)
        return EXIT_DATA
    return 0
