"""``ddfrac`` command line: bounds, color, check, verify-cover, dump."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from ddfrac.cover import dsatur, extract_coloring, verify_cover
from ddfrac.dd import DEFAULT_NODE_LIMIT, ORDERINGS, NodeLimitExceeded, compile_exact, dump
from ddfrac.flow import WeightedCover, flow_to_cover, solve_fractional, solve_integral
from ddfrac.graph import DimacsParseError, Graph, parse_dimacs, write_dimacs
from ddfrac.oracle import MAX_COLOR_N

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 3
EXIT_NODE_LIMIT = 4
EXIT_TIMEOUT = 5

DEFAULT_TIME_LIMIT = 3600.0

log = logging.getLogger("ddfrac")


def truncated(q: Fraction, places: int = 2) -> str:
    scale = 10**places
    v = math.floor(q * scale)
    return f"{v // scale}.{v % scale:0{places}d}"


def _load(path: str) -> Graph:
    if path == "-":
        return parse_dimacs(sys.stdin.buffer.read(), name="stdin")
    p = Path(path)
    return parse_dimacs(p.read_bytes(), name=p.stem)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("file", help="DIMACS .col file ('-' for stdin)")
    sp.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    sp.add_argument("--order", choices=ORDERINGS, default="identity")
    sp.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT, help="seconds")
    sp.add_argument("--json", action="store_true", help="machine-readable output")


def cmd_bounds(args) -> int:
    try:
        g = _load(args.file)
    except (DimacsParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rep = {
        "instance": g.name, "n": g.n, "m": g.m, "mode": args.mode,
        "dd_nodes": None, "dd_arcs": None, "dd_time_s": None,
        "chi_f": None, "chi_lb": None, "chi_ub": None, "dsatur_ub": None,
        "ilp_status": None, "solve_time_s": None, "error": None,
    }
    code = EXIT_OK
    t0 = time.perf_counter()
    ub = dsatur(g).num_colors
    rep["dsatur_ub"] = rep["chi_ub"] = ub
    try:
        d = compile_exact(g, args.order, args.node_limit)
    except NodeLimitExceeded as exc:
        rep["dd_time_s"] = round(time.perf_counter() - t0, 3)
        rep["error"] = str(exc)
        _emit_bounds(rep, args.json)
        return EXIT_NODE_LIMIT
    rep["dd_time_s"] = round(time.perf_counter() - t0, 3)
    rep["dd_nodes"], rep["dd_arcs"] = d.node_count, d.arc_count

    solve_time = 0.0
    lb = None
    if args.mode in ("lp", "both"):
        frac = solve_fractional(d, g)
        solve_time += frac.solve_time_s
        rep["chi_f"] = {"num": frac.chi_f.numerator, "den": frac.chi_f.denominator}
        lb = math.ceil(frac.chi_f)
    if args.mode in ("ilp", "both"):
        res = solve_integral(d, g, time_limit=args.time_limit)
        solve_time += res.solve_time_s
        rep["ilp_status"] = res.status.value
        if res.chi is not None:
            rep["chi_ub"] = min(ub, res.chi)
        if res.lower_bound is not None:
            lb = res.lower_bound if lb is None else max(lb, res.lower_bound)
        if not res.optimal:
            code = EXIT_TIMEOUT
    rep["chi_lb"] = lb
    rep["solve_time_s"] = round(solve_time, 3)
    _emit_bounds(rep, args.json)
    return code


def _emit_bounds(rep: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(rep, sort_keys=True))
        return
    rows = [("instance", rep["instance"]), ("vertices", rep["n"]), ("edges", rep["m"])]
    if rep["error"]:
        rows.append(("error", rep["error"]))
    else:
        rows += [("dd nodes", rep["dd_nodes"]), ("dd arcs", rep["dd_arcs"])]
    rows.append(("dd time s", rep["dd_time_s"]))
    if rep["chi_f"] is not None:
        q = Fraction(rep["chi_f"]["num"], rep["chi_f"]["den"])
        rows.append(("chi_f", f"{q.numerator}/{q.denominator} ({truncated(q)})"))
    if rep["ilp_status"] is not None:
        rows.append(("ilp status", rep["ilp_status"]))
    rows += [("lb", rep["chi_lb"] if rep["chi_lb"] is not None else "-"),
             ("ub", rep["chi_ub"]), ("dsatur ub", rep["dsatur_ub"])]
    if rep["solve_time_s"] is not None:
        rows.append(("solve time s", rep["solve_time_s"]))
    for k, v in rows:
        print(f"{k:<13} {v}")


def cmd_color(args) -> int:
    try:
        g = _load(args.file)
    except (DimacsParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        d = compile_exact(g, args.order, args.node_limit)
    except NodeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        col = dsatur(g)
        print("c dsatur fallback, not proven optimal")
        print(col.dumps(), end="")
        return EXIT_NODE_LIMIT
    res = solve_integral(d, g, time_limit=args.time_limit)
    if res.flow is None:  # pragma: no cover - solve_integral always seeds an incumbent
        print("error: no integral solution", file=sys.stderr)
        return EXIT_TIMEOUT
    z = flow_to_cover([Fraction(v) for v in res.flow], d)
    col = extract_coloring(g, z)
    if not col.is_proper(g):
        print("error: extracted coloring is not proper", file=sys.stderr)
        return EXIT_FAILED
    if not res.optimal:
        print(f"c non-optimal: time limit reached, lower bound {res.lower_bound}")
    print(f"c instance {g.name} verified proper")
    print(col.dumps(), end="")
    return EXIT_OK if res.optimal else EXIT_TIMEOUT


def cmd_check(args) -> int:
    from ddfrac.checks import check_graph, random_trials

    if args.max_n > MAX_COLOR_N or args.max_n < 4:
        print(f"error: --max-n must lie in 4..{MAX_COLOR_N}", file=sys.stderr)
        return EXIT_FAILED
    passed = failed = 0
    first = None
    for i, n, p, gseed, g in random_trials(args.max_n, args.trials, args.seed):
        r = check_graph(g)
        if r.ok:
            passed += 1
        else:
            failed += 1
            if first is None:
                first = (i, n, p, gseed, g, r.failures)
        if args.verbose:
            print(f"trial {i}: n={n} p={p} seed={gseed} chi_f={r.chi_f} chi={r.chi} {'ok' if r.ok else 'FAIL'}")
    if args.file:
        try:
            g = _load(args.file)
        except (DimacsParseError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        r = check_graph(g)
        print(f"file {g.name}: chi_f={r.chi_f} chi={r.chi} {'ok' if r.ok else 'FAIL'}")
        if r.ok:
            passed += 1
        else:
            failed += 1
            if first is None:
                first = ("file", g.n, None, None, g, r.failures)
    total = passed + failed
    print(f"passed {passed}/{total}")
    if first is not None:
        i, n, p, gseed, g, why = first
        print(f"first counterexample: trial {i} n={n} p={p} seed={gseed}")
        for w in why:
            print(f"  {w}")
        print(write_dimacs(g), end="")
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify_cover(args) -> int:
    try:
        g = _load(args.graph)
    except (DimacsParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        z = WeightedCover.loads(Path(args.cover).read_text())
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rep = verify_cover(g, z)
    print(rep)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_dump(args) -> int:
    try:
        g = _load(args.file)
    except (DimacsParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        d = compile_exact(g, args.order, args.node_limit)
    except NodeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NODE_LIMIT
    print(dump(d), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddfrac", description=__doc__)
    ap.add_argument("-v", "--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bounds", help="chi_f / chi bounds from the exact decision diagram")
    _add_common(sp)
    sp.add_argument("--mode", choices=("lp", "ilp", "both"), default="both")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("color", help="optimal coloring via the integral flow model")
    _add_common(sp)
    sp.set_defaults(func=cmd_color)

    sp = sub.add_parser("check", help="random-graph equivalence and invariant suite")
    sp.add_argument("file", nargs="?", help="optional extra DIMACS graph to check")
    sp.add_argument("--max-n", type=int, default=10)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify-cover", help="verify a weighted stable-set cover file")
    sp.add_argument("graph")
    sp.add_argument("cover")
    sp.set_defaults(func=cmd_verify_cover)

    sp = sub.add_parser("dump", help="print the exact decision diagram")
    sp.add_argument("file")
    sp.add_argument("--order", choices=ORDERINGS, default="identity")
    sp.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    sp.set_defaults(func=cmd_dump)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
