"""Command-line interface.

All indices in input and output are 1-based. Results go to stdout as JSON
(or CSV where ``--format csv`` makes sense); diagnostics go to stderr.

Exit codes: 0 success, 2 invalid input, 3 resource bound hit, 1 internal fault.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import io as pio
from .basis import generate_basic_moves
from .connector import ConnectorConfig, connect
from .errors import Disconnected, InvalidInput, ResourceBound
from .fiber import DEFAULT_MAX_TABLES, components, enumerate_fiber, verify_bounded, witness_marginals
from .mcmc import WalkConfig, exact_test
from .patterns import classify
from .tables import marginals

log = logging.getLogger("subtable_markov")

EXIT_OK, EXIT_FAULT, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def _emit(obj, out):
    json.dump(obj, out)
    out.write("\n")


def _need_table(problem):
    if problem.table is None:
        raise InvalidInput("this command needs a 'table' in the problem file")
    return problem.table


def cmd_classify(args, out):
    problem = pio.load_problem(args.input)
    _emit(classify(problem.mask).to_json(), out)


def cmd_basis(args, out):
    problem = pio.load_problem(args.input)
    moves = generate_basic_moves(problem.mask)
    if args.format == "csv":
        out.write("i,i2,j,j2\n")
        for m in moves:
            out.write(f"{m.i + 1},{m.i2 + 1},{m.j + 1},{m.j2 + 1}\n")
    else:
        _emit(moves.to_json(), out)


def cmd_fiber(args, out):
    problem = pio.load_problem(args.input)
    table = _need_table(problem)
    fiber = enumerate_fiber(marginals(table, problem.mask), problem.mask)
    if args.format == "csv":
        out.write("\n".join(pio.table_to_csv(t) for t in fiber.elements))
    else:
        _emit(fiber.to_json(), out)


def cmd_witness(args, out):
    problem = pio.load_problem(args.input)
    found = witness_marginals(problem.mask)
    if found is None:
        _emit({"basic_moves_suffice": True, "witness": None}, out)
        return
    w, m = found
    fiber = enumerate_fiber(m, problem.mask)
    graph = components(fiber, generate_basic_moves(problem.mask))
    _emit({"basic_moves_suffice": False, "witness": w.to_json(),
           "marginals": m.to_json(),
           "fiber": [t.tolist() for t in fiber.elements],
           "difference": (fiber.elements[-1] - fiber.elements[0]).tolist(),
           **graph.to_json()}, out)


def cmd_verify(args, out):
    problem = pio.load_problem(args.input)
    report = verify_bounded(problem.mask, None, args.max_total, max_tables=args.max_tables)
    _emit(report.to_json(), out)


def cmd_connect(args, out):
    problem = pio.load_problem(args.input)
    x = pio.load_table_csv(args.x)
    y = pio.load_table_csv(args.y)
    config = ConnectorConfig(max_sequence_depth=args.depth, bfs_fallback_limit=args.bfs_limit)
    try:
        path = connect(x, y, problem.mask, config)
    except Disconnected as exc:
        _emit({"connected": False, "reason": str(exc), "fiber_size": exc.fiber_size,
               "component_sizes": exc.component_sizes}, out)
        return
    _emit({"connected": True, "length": len(path), "path": [s.to_json() for s in path]}, out)


def cmd_test(args, out):
    problem = pio.load_problem(args.input)
    table = _need_table(problem)
    config = WalkConfig(steps=args.steps, burn_in=args.burn_in, thinning=args.thin, seed=args.seed)
    report = exact_test(table, problem.mask, config)
    if report.connectivity_warning:
        log.warning("basic moves do not connect every fiber for this subtable; "
                    "the walk may be confined to one component")
    _emit(report.to_json(), out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subtable-markov",
                                description="Markov bases for two-way tables with a fixed subtable sum.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-i", "--input", required=True, help="problem JSON file")
        sp.set_defaults(func=func)
        return sp

    add("classify", cmd_classify, "block diagonal / triangular / neither, with a witness")
    sp = add("basis", cmd_basis, "list the S-preserving basic moves")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp = add("fiber", cmd_fiber, "enumerate the fiber of the problem's table")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    add("witness", cmd_witness, "two-element fiber disconnected by basic moves")
    sp = add("verify", cmd_verify, "check connectivity of every fiber up to a total")
    sp.add_argument("--max-total", type=int, default=4)
    sp.add_argument("--max-tables", type=int, default=DEFAULT_MAX_TABLES)
    sp = add("connect", cmd_connect, "basic-move path between two tables")
    sp.add_argument("--x", required=True, help="CSV table")
    sp.add_argument("--y", required=True, help="CSV table")
    sp.add_argument("--depth", type=int, default=ConnectorConfig.max_sequence_depth)
    sp.add_argument("--bfs-limit", type=int, default=ConnectorConfig.bfs_fallback_limit)
    sp = add("test", cmd_test, "Monte Carlo exact test of the problem's table")
    sp.add_argument("--steps", type=int, default=10_000)
    sp.add_argument("--burn-in", type=int, default=0)
    sp.add_argument("--thin", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    return p


def dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args, out)
    except (InvalidInput, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ResourceBound as exc:
        log.error("%s", exc)
        return EXIT_BOUND
    except Exception:
        log.exception("internal error")
        return EXIT_FAULT
    return EXIT_OK


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
