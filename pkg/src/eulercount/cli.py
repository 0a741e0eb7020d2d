"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 compare mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import oracle
from .multigraph import GraphFormatError, MultiGraph, NotEulerianError, factorial_factor, parse_edge_list
from .orbdp import count_orbs, prepare
from .treedecomp import DecompositionError, format_td, min_fill_decompose, parse_td, validate_decomposition

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunReport:
    n: int
    m: int
    width_used: int
    orbs: int
    factorial_factor: int
    euler_tours: int
    elapsed_milliseconds: float
    mode: str

    def __post_init__(self) -> None:
        if self.euler_tours != self.orbs * self.factorial_factor:
            raise ValueError("euler_tours must equal orbs * factorial_factor")


def format_report(report: RunReport, as_json: bool = False, primary: str = "euler_tours") -> str:
    if not as_json:
        return str(getattr(report, primary))
    data = asdict(report)
    for key in ("orbs", "factorial_factor", "euler_tours"):
        data[key] = str(data[key])
    return json.dumps(data, sort_keys=True)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eulercount", description="Exact Euler tour counting over tree decompositions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (("count", "print the number of Euler tours"), ("orbs", "print |ORB(G, r)|")):
        p = sub.add_parser(name, help=text)
        p.add_argument("graph")
        p.add_argument("--td", help="tree decomposition in PACE .td format")
        p.add_argument("--root", type=int, help="root vertex (1-based, default 1)")
        p.add_argument("--json", action="store_true", help="print the full run report as JSON")

    p = sub.add_parser("decompose", help="write a min-fill tree decomposition")
    p.add_argument("graph")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify-td", help="validate a tree decomposition")
    p.add_argument("graph")
    p.add_argument("td")

    p = sub.add_parser("brute", help="run a brute-force oracle")
    p.add_argument("graph")
    p.add_argument("--method", choices=("tours", "orbs", "best"), default="tours")
    p.add_argument("--root", type=int)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)

    p = sub.add_parser("compare", help="run the DP and the backtracking oracle side by side")
    p.add_argument("graph")
    p.add_argument("--root", type=int)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _root(g: MultiGraph, root: int | None) -> int:
    if root is None:
        return 0
    if not 1 <= root <= g.n:
        raise InputError(f"root {root} out of range 1..{g.n}")
    return root - 1


def _dp_report(g: MultiGraph, td_path: str | None, root: int | None) -> RunReport:
    start = time.perf_counter()
    td = parse_td(_read(td_path)) if td_path else None
    r = _root(g, root)
    ntd = prepare(g, td, r)
    orbs = count_orbs(g, ntd, r)
    ff = factorial_factor(g)
    elapsed = (time.perf_counter() - start) * 1000.0
    return RunReport(g.n, g.m, ntd.width, orbs, ff, orbs * ff, round(elapsed, 3), "dp")


def _dispatch(args, out) -> int:
    if args.command == "verify-td":
        g = parse_edge_list(_read(args.graph))
        report = validate_decomposition(g, parse_td(_read(args.td)))
        print(report.describe(), file=out)
        return EXIT_OK if report.valid else EXIT_INPUT

    g = parse_edge_list(_read(args.graph))
    if args.command in ("count", "orbs"):
        report = _dp_report(g, args.td, args.root)
        primary = "euler_tours" if args.command == "count" else "orbs"
        print(format_report(report, args.json, primary), file=out)
        return EXIT_OK

    if args.command == "decompose":
        text = format_td(min_fill_decompose(g))
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            out.write(text)
        return EXIT_OK

    if args.command == "brute":
        r = _root(g, args.root)
        if args.method == "tours":
            value = oracle.enumerate_euler_tours(g, args.cap)
        elif args.method == "orbs":
            value = oracle.count_orbs_bruteforce(g, r, args.cap)
        else:
            value = oracle.best_theorem_count(g, r, args.cap)
        print(value, file=out)
        return EXIT_OK

    # compare
    dp = _dp_report(g, None, args.root).euler_tours
    truth = oracle.enumerate_euler_tours(g, args.cap)
    verdict = "MATCH" if dp == truth else "MISMATCH"
    print(f"dp={dp} oracle={truth} {verdict}", file=out)
    return EXIT_OK if dp == truth else EXIT_MISMATCH


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _dispatch(args, out)
    except (InputError, GraphFormatError, NotEulerianError, DecompositionError, oracle.CapExceededError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
