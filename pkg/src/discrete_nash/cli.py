"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 solver failure or limit hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys

from .bench import generate, generate_two_groups
from .branching import SearchOptions, SearchStats, solve_all
from .jacobi import SCHEDULES, PartitionError, detect_partition, first_row_partition, jacobi_solve
from .model import IntBox, ProblemError, count_points, dump_problem, read_problem
from .oracle import DEFAULT_BUDGET, BudgetExceededError, enumerate_equilibria, is_equilibrium
from .shrink import shrink_fixed_point
from .validation import check_profile, parse_point

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2

# lets "--bounds -5,5" parse as a value rather than an unknown flag
_NEGATIVE_VALUE = re.compile(r"^-\d+(\.\d*)?([eE][-+]?\d+)?(,-?\d*\.?\d+([eE][-+]?\d+)?)*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE_VALUE

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def format_pct(value: float | None) -> str | None:
    """Two decimals, ``"<0.01"`` for positive values under half a basis point."""
    if value is None:
        return None
    if value == 0:
        return "0.00"
    if value < 0.005:
        return "<0.01"
    return f"{value:.2f}"


def stats_document(stats: SearchStats) -> dict:
    doc = {
        "eq": stats.eq_count,
        "pct_1st": format_pct(stats.percent(stats.oracle_calls_at_first)),
        "pct_last": format_pct(stats.percent(stats.oracle_calls_at_last)),
        "pct_tot": format_pct(stats.percent(stats.oracle_calls_total)),
        "pct_LB": format_pct(stats.percent(stats.points_cut_by_shrink)),
        "pct_F": format_pct(stats.percent(stats.points_cut_by_F)),
        "O_1st": stats.oracle_calls_at_first,
        "O_last": stats.oracle_calls_at_last,
        "O_tot": stats.oracle_calls_total,
        "O_unique": stats.oracle_calls_unique,
        "iter": stats.nodes_processed,
    }
    raw = stats.as_dict()
    # feasible_total can exceed 64 bits; keep it exact as a string
    raw["feasible_total"] = str(stats.feasible_total)
    doc.update(raw)
    return doc


def _pair(kind):
    def parse(text):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected A,B, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected two {kind.__name__} values, got {text!r}") from None
    return parse


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discrete-nash", description="Equilibria of integer Nash games with quadratic costs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def search_flags(p):
        p.add_argument("file")
        p.add_argument("--improved", action="store_true", help="shrink bounds before branching")
        order = p.add_mutually_exclusive_group()
        order.add_argument("--fifo", dest="discipline", action="store_const", const="fifo")
        order.add_argument("--lifo", dest="discipline", action="store_const", const="lifo")
        p.set_defaults(discipline="fifo")
        p.add_argument("--tol", type=float, default=SearchOptions.tol)
        p.add_argument("--round-eps", type=float, default=SearchOptions.round_eps)
        p.add_argument("--max-nodes", type=_positive_int, default=None)
        p.add_argument("--out", default=None)

    search_flags(sub.add_parser("solve-all", help="every equilibrium"))
    search_flags(sub.add_parser("solve-one", help="stop at the first equilibrium"))

    p = sub.add_parser("jacobi", help="one equilibrium by best-response dynamics")
    p.add_argument("file")
    p.add_argument("--schedule", choices=SCHEDULES, default="gauss-seidel")
    p.add_argument("--partition", choices=("auto", "first-row"), default="auto")
    p.add_argument("--max-steps", type=_positive_int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("shrink", help="bounds enclosing every equilibrium")
    p.add_argument("file")
    p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate", help="brute-force equilibrium set")
    p.add_argument("file")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--out", default=None)

    p = sub.add_parser("check", help="test a single profile")
    p.add_argument("file")
    p.add_argument("--point", required=True)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--players", type=_positive_int, required=True)
    p.add_argument("--vars", type=_positive_int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--b-range", type=_pair(float), required=True)
    p.add_argument("--bounds", type=_pair(int), required=True)
    p.add_argument("--eig", type=_pair(float), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--two-groups", action="store_true", help="force a valid two-group sign structure")
    p.add_argument("--out", default=None)
    return parser


def _emit(document, out):
    text = json.dumps(document, indent=2)
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _load(path):
    try:
        return read_problem(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except ProblemError as exc:
        raise UsageError(f"invalid instance {path}: {exc}") from exc


def _cmd_search(args, first_only):
    problem = _load(args.file)
    opts = SearchOptions(improved=args.improved, discipline=args.discipline, tol=args.tol,
                         round_eps=args.round_eps, max_nodes=args.max_nodes, first_only=first_only)
    result = solve_all(problem, opts)
    doc = {"equilibria": [list(e) for e in result.equilibria], "complete": result.stats.complete,
           "stats": stats_document(result.stats)}
    if result.bounds is not None:
        doc["bounds"] = {"lower": result.bounds[0].tolist(), "upper": result.bounds[1].tolist()}
    _emit(doc, args.out)
    # for solve-one a found point is success even though the tree was left unexplored
    ok = result.stats.complete or (first_only and bool(result.equilibria))
    return EXIT_OK if ok else EXIT_SOLVER


def _cmd_jacobi(args):
    problem = _load(args.file)
    valid = True
    if args.partition == "auto":
        try:
            part = detect_partition(problem)
        except PartitionError:
            part, valid = first_row_partition(problem), False
    else:
        part = first_row_partition(problem)
        valid = part.is_valid_for(problem)
    res = jacobi_solve(problem, part, args.schedule, args.max_steps, keep_trace=False)
    doc = {
        "equilibria": [list(res.point)] if res.converged else [],
        "converged": res.converged,
        "partition": {"G1": part.G1, "G2": part.G2, "valid": valid},
        "stats": {"steps": res.steps, "sweeps": res.sweeps, "best_responses": res.best_responses},
    }
    _emit(doc, args.out)
    return EXIT_OK if res.converged else EXIT_SOLVER


def _cmd_shrink(args):
    problem = _load(args.file)
    lo, hi = shrink_fixed_point(problem)
    total = count_points(problem.box)
    cut = total - count_points(IntBox(lo, hi))
    _emit({"lower": lo.tolist(), "upper": hi.tolist(),
           "stats": {"pct_LB": format_pct(100.0 * cut / total), "points_cut_by_shrink": cut,
                     "feasible_total": str(total)}}, args.out)
    return EXIT_OK


def _cmd_enumerate(args):
    problem = _load(args.file)
    try:
        eqs = enumerate_equilibria(problem, budget=args.budget)
    except BudgetExceededError as exc:
        print(f"discrete-nash: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit({"equilibria": [list(e) for e in eqs]}, args.out)
    return EXIT_OK


def _cmd_check(args):
    problem = _load(args.file)
    try:
        point = check_profile(problem, parse_point(args.point))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    verdict = is_equilibrium(problem, point)
    print(f"equilibrium: {'true' if verdict else 'false'}")
    return EXIT_OK


def _cmd_gen(args):
    maker = generate_two_groups if args.two_groups else generate
    try:
        problem = maker(args.players, args.vars, args.b_range, args.bounds, args.h, args.eig, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = dump_problem(problem)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {
        "solve-all": lambda a: _cmd_search(a, first_only=False),
        "solve-one": lambda a: _cmd_search(a, first_only=True),
        "jacobi": _cmd_jacobi,
        "shrink": _cmd_shrink,
        "enumerate": _cmd_enumerate,
        "check": _cmd_check,
        "gen": _cmd_gen,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"discrete-nash: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"discrete-nash: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
