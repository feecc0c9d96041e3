"""Command-line entry point: ``localcolor <command> ...``.

Every command prints a JSON run report (sorted keys) to stdout.

Exit codes:
    0  success (for ``solve``: the question was answered, colorable or not)
    1  a check failed (``check`` on an invalid coloring, ``verify`` mismatch)
    2  usage error or invalid parameter
    3  malformed input file
    4  search budget exhausted
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .coloring import ColoringError, Mode, find_violation, format_coloring, parse_coloring
from .gadgets import GammaCache, WitnessNotFound, gamma_graph
from .graph import GraphError, format_graph, parse_graph
from .reduction import NaeParseError, ReductionError, parse_nae, reduce_full, reduce_to_constrained
from .solver import (
    DEFAULT_BUDGET,
    BudgetExhausted,
    ConstrainedInstance,
    SearchStats,
    SolverConfig,
    find_coloring,
    GroupFormatError,
    format_groups,
    parse_groups,
    solve_constrained,
)
from . import verify as suites

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4

log = logging.getLogger("localcolor")


@dataclass
class RunReport:
    command: list[str]
    status: str = "ok"
    seed: int | None = None
    inputs: dict[str, str] = field(default_factory=dict)  # path -> sha256
    results: dict = field(default_factory=dict)
    elapsed: float = 0.0
    nodes: int = 0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls(**json.loads(text))


class _UsageError(Exception):
    pass


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _read(report: RunReport, path: str) -> str:
    p = Path(path)
    report.inputs[str(p)] = _digest(p)
    return p.read_text()


def _k_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k {text!r}") from None


def _mode_arg(text: str) -> Mode:
    try:
        return Mode.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_reduce(args, report: RunReport) -> int:
    if args.k < 3:
        raise _UsageError(f"--k must be at least 3, got {args.k}")
    if args.mode is Mode.PROPER:
        raise _UsageError("--mode must be local or semi-matching")
    inst = parse_nae(_read(report, args.nae_file))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.stage == "constrained":
        cinst, trace = reduce_to_constrained(inst, args.k, args.mode)
        g = cinst.g
        groups_path = Path(f"{out}.groups")
        groups_path.write_text(format_groups(cinst.groups))
        report.results["groups_file"] = str(groups_path)
        report.results["groups"] = len(cinst.groups)
    else:
        g, trace = reduce_full(inst, args.k, args.mode)
    graph_path = Path(f"{out}.graph")
    trace_path = Path(f"{out}.trace.json")
    graph_path.write_text(format_graph(g))
    trace_path.write_text(json.dumps(trace.to_dict(), sort_keys=True, indent=2))
    report.results.update(
        stage=args.stage,
        vertices=g.n,
        edges=g.m,
        graph_file=str(graph_path),
        trace_file=str(trace_path),
    )
    return EXIT_OK


def cmd_solve(args, report: RunReport) -> int:
    g = parse_graph(_read(report, args.graph_file))
    cfg = SolverConfig(args.mode, args.k, args.budget, deterministic=True, workers=args.workers)
    stats = SearchStats()
    try:
        if args.constraints:
            groups = parse_groups(_read(report, args.constraints), g.n)
            col = solve_constrained(ConstrainedInstance(g, tuple(groups)), cfg, stats)
        else:
            col = find_coloring(g, cfg, stats=stats)
    finally:
        report.nodes = stats.nodes
    report.results["answer"] = "colorable" if col is not None else "not-colorable"
    if col is not None:
        report.results["coloring"] = format_coloring(col)
        if args.out:
            Path(args.out).write_text(format_coloring(col))
    return EXIT_OK


def cmd_check(args, report: RunReport) -> int:
    g = parse_graph(_read(report, args.graph_file))
    col = parse_coloring(_read(report, args.coloring_file), g.n)
    bad = find_violation(g, col, args.mode)
    report.results["valid"] = bad is None
    if bad is not None:
        report.results["violation"] = {"kind": bad.kind, "vertices": [v + 1 for v in bad.vertices], "detail": bad.detail}
        report.status = "invalid"
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_verify(args, report: RunReport) -> int:
    report.seed = args.seed
    suite = args.suite
    if suite == "thrc":
        checks = [suites.check_thrc(args.n_max, args.budget)]
    elif suite == "gadgets":
        ks = suites.parse_range(args.k)
        if min(ks) < 3:
            raise _UsageError("gadget suite needs k >= 3")
        checks = [
            suites.check_pattern_tables(ks),
            suites.check_constructions(suites.parse_range(args.construct_k)),
            suites.check_apex(ks),
        ]
    elif suite == "gamma":
        checks = suites.check_gamma(range(1, args.tau_max + 1), args.budget)
    elif suite == "equality":
        checks = [suites.check_equality(args.count, args.seed)]
    elif suite == "e2e":
        ks = suites.parse_range(args.k)
        if min(ks) < 3:
            raise _UsageError("e2e suite needs k >= 3")
        checks = suites.check_e2e_full(args.vars, args.clauses, ks)
        if args.count:
            checks += suites.check_e2e_random(args.count, args.seed, ks)
    elif suite == "validators":
        checks = [suites.check_validators(args.count, args.seed)]
    else:  # derived
        checks = [suites.check_derived()]
    for c in checks:
        log.info(c.line())
    report.results["checks"] = [c.to_dict() for c in checks]
    report.results["passed"] = all(c.passed for c in checks)
    if not report.results["passed"]:
        report.status = "failed"
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_gamma_search(args, report: RunReport) -> int:
    cache = GammaCache(args.cache) if args.cache else None
    try:
        w = gamma_graph(args.tau, cache=cache, node_budget=args.budget)
    except WitnessNotFound as exc:
        report.status = "not-found"
        report.results["error"] = str(exc)
        return EXIT_BUDGET
    report.results.update(
        tau=w.tau,
        vertices=w.g.n,
        edges=w.g.m,
        graph=format_graph(w.g),
        witnesses={m.value: format_coloring(c) for m, c in w.witnesses.items()},
    )
    if cache is not None:
        report.results["cache_file"] = str(cache.path(w.tau))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localcolor", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mode=True, k=True):
        if k:
            sp.add_argument("--k", type=_k_arg, required=True)
        if mode:
            sp.add_argument("--mode", type=_mode_arg, default=Mode.LOCAL, help="proper, local or semi-matching")

    r = sub.add_parser("reduce", help="reduce an NAE 3-SAT instance to a coloring instance")
    r.add_argument("nae_file")
    common(r)
    r.add_argument("--stage", choices=("constrained", "full"), default="full")
    r.add_argument("--out", required=True, help="output path prefix")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide k-colorability and print a witness")
    s.add_argument("graph_file")
    common(s)
    s.add_argument("--constraints", help="group file: each group monochromatic in {1, k}")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="write the coloring here")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="validate a coloring")
    c.add_argument("graph_file")
    c.add_argument("coloring_file")
    common(c, k=False)
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=("thrc", "gadgets", "gamma", "equality", "e2e", "validators", "derived"))
    v.add_argument("--n-max", type=int, default=8)
    v.add_argument("--k", default="3..7", help="k values, e.g. 3..7 or 3,4")
    v.add_argument("--construct-k", default="3..12")
    v.add_argument("--tau-max", type=int, default=3)
    v.add_argument("--vars", type=int, default=2)
    v.add_argument("--clauses", type=int, default=2)
    v.add_argument("--count", type=int, default=0, help="random corpus size (0: suite default)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    v.set_defaults(func=cmd_verify)

    gs = sub.add_parser("gamma-search", help="find and certify a Gamma witness")
    gs.add_argument("--tau", type=int, required=True)
    gs.add_argument("--budget", type=int, default=10**6)
    gs.add_argument("--cache", help="cache directory")
    gs.set_defaults(func=cmd_gamma_search)
    return p


_DEFAULT_COUNTS = {"equality": 100, "validators": 1000}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    if args.command == "verify" and not args.count:
        args.count = _DEFAULT_COUNTS.get(args.suite, 0)
    report = RunReport(command=argv)
    start = time.perf_counter()
    try:
        code = args.func(args, report)
    except _UsageError as exc:
        report.status, report.results["error"], code = "usage-error", str(exc), EXIT_USAGE
    except (NaeParseError, GraphError, ColoringError, GroupFormatError, OSError) as exc:
        report.status, report.results["error"], code = "parse-error", str(exc), EXIT_PARSE
    except BudgetExhausted as exc:
        report.status, report.results["error"], code = "budget-exhausted", str(exc), EXIT_BUDGET
        report.nodes = max(report.nodes, exc.nodes)
    except WitnessNotFound as exc:
        report.status, report.results["error"], code = "not-found", str(exc), EXIT_BUDGET
    except (ReductionError, ValueError) as exc:
        report.status, report.results["error"], code = "usage-error", str(exc), EXIT_USAGE
    report.elapsed = round(time.perf_counter() - start, 6)
    print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
