"""Command-line front end.

Exit codes: 0 when every requested evaluation or suite passes, 1 on a
verification or evaluation failure, 2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional

from swapalg import cluster_x2 as cx
from swapalg.core_ring import PointSet, SwapFraction
from swapalg.errors import (
    BadParams,
    DenominatorVanishesInZn,
    DivisionByZero,
    ParseError,
    SwapAlgError,
    UnknownSuite,
)
from swapalg.expr import eval_expr, evaluate, parse_expr, simplify_value
from swapalg.rank_reduction import check_fraction, is_zero_Zn, normal_form_Zn
from swapalg.swap_bracket import bracket
from swapalg.verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _points(text: str) -> PointSet:
    names = [n.strip() for n in text.split(",") if n.strip()]
    return PointSet(names)


def _emit(args, payload: dict, lines: List[str]):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -- algebra commands ---------------------------------------------------------


def cmd_eval(args) -> int:
    points = _points(args.points)
    result = eval_expr(args.expr, points, args.rank)
    payload = {"expr": args.expr, "value": str(result.value)}
    if args.rank is not None:
        payload.update(rank=args.rank, zero=result.is_zero,
                       numerator_nf=str(result.numerator_nf),
                       denominator_nf=str(result.denominator_nf))
    else:
        payload["zero"] = result.value == 0
    _emit(args, payload, result.lines())
    return EXIT_OK


def cmd_bracket(args) -> int:
    points = _points(args.points)
    f = evaluate(parse_expr(args.left, points), points, args.rank)
    g = evaluate(parse_expr(args.right, points), points, args.rank)
    value = simplify_value(bracket(f, g))
    lines = [f"value: {value}"]
    payload = {"left": args.left, "right": args.right, "value": str(value)}
    if args.rank is not None:
        if isinstance(value, SwapFraction):
            check_fraction(value, args.rank)
            zero = is_zero_Zn(value.num, args.rank)
        else:
            zero = is_zero_Zn(value, args.rank)
        lines.append(f"zero in Z_{args.rank}: {str(zero).lower()}")
        payload.update(rank=args.rank, zero=zero)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_reduce(args) -> int:
    points = _points(args.points)
    value = evaluate(parse_expr(args.expr, points), points, args.rank)
    num = value.num if isinstance(value, SwapFraction) else value
    nf = normal_form_Zn(num, args.rank)
    lines = [f"normal form: {nf}", f"zero in Z_{args.rank}: {str(nf.is_zero()).lower()}"]
    payload = {"expr": args.expr, "rank": args.rank, "normal_form": str(nf), "zero": nf.is_zero()}
    if isinstance(value, SwapFraction):
        den_nf = normal_form_Zn(value.den, args.rank)
        lines.insert(1, f"denominator normal form: {den_nf}")
        payload["denominator_nf"] = str(den_nf)
    _emit(args, payload, lines)
    return EXIT_OK


# -- verification ------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suites == ["all"] else args.suites
    reports = []
    for name in names:
        params = {}
        for key, value in (("points", args.points), ("n", args.rank), ("k", args.k),
                           ("trials", args.trials), ("mode", args.mode)):
            if value is not None:
                params[key] = value
        reports.append(run_suite(name, params, args.seed))
    if args.json:
        payload = [r.to_dict() for r in reports]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    else:
        for r in reports:
            print(r.summary())
            for note in r.notes:
                print(f"  {note}")
            for f in r.failures[:10]:
                print(f"  input: {f.input}\n    expected: {f.expected}\n    got: {f.got}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# -- cluster ------------------------------------------------------------------------


def _triangulation(args) -> cx.Triangulation:
    if not args.edges:
        return cx.fan(args.k)
    # "v1v3,v1v4" or "1,3;1,4"
    sep = r"[;,\s]+" if "v" in args.edges else r"[;\s]+"
    edges = [cx.parse_edge(e, args.k) for e in re.split(sep, args.edges) if e.strip()]
    return cx.Triangulation(args.k, frozenset(edges))


def cmd_cluster(args) -> int:
    k = args.k
    if not (cx.MIN_K <= k <= cx.MAX_K):
        raise BadParams(f"k must lie in {cx.MIN_K}..{cx.MAX_K}")
    if args.action == "list":
        tris = cx.enumerate_triangulations(k)
        _emit(args, {"k": k, "count": len(tris),
                     "triangulations": [[cx.edge_name(e) for e in T.edges] for T in tris]},
              [f"{len(tris)} triangulations"] + [str(T) for T in tris])
        return EXIT_OK
    T = _triangulation(args)
    if args.action == "epsilon":
        eps = cx.epsilon(T)
        names = [cx.edge_name(e) for e in eps.edges]
        rows = eps.rows()
        width = max(len(n) for n in names)
        lines = [f"triangulation {T}", " " * width + " " + " ".join(f"{n:>{width}}" for n in names)]
        for n, row in zip(names, rows):
            lines.append(f"{n:>{width}} " + " ".join(f"{v:>{width}}" for v in row))
        _emit(args, {"triangulation": names, "edges": names, "matrix": rows}, lines)
        return EXIT_OK
    if args.action == "flip":
        if not args.edge:
            raise BadParams("flip needs --edge")
        e = cx.parse_edge(args.edge, k)
        T2, e2 = cx.flip(T, e)
        _emit(args, {"triangulation": [cx.edge_name(f) for f in T.edges], "edge": cx.edge_name(e),
                     "flipped": [cx.edge_name(f) for f in T2.edges], "new_edge": cx.edge_name(e2)},
              [f"{T} --{cx.edge_name(e)}--> {T2}", f"new edge: {cx.edge_name(e2)}"])
        return EXIT_OK
    if args.action == "theta":
        edges = [cx.parse_edge(args.edge, k)] if args.edge else list(T.edges)
        values = {cx.edge_name(e): str(cx.theta(T, e)) for e in edges}
        _emit(args, {"triangulation": [cx.edge_name(f) for f in T.edges], "theta": values},
              [f"theta(X_{name}) = {v}" for name, v in values.items()])
        return EXIT_OK
    # check
    tris = [T] if args.edges else cx.enumerate_triangulations(k)
    reports = []
    for S in tris:
        reports.append(cx.check_theta_poisson(S))
        for e in S.edges:
            reports.append(cx.check_flip_compat(S, e))
            reports.append(cx.check_mutation_poisson(S, e))
    ok = all(r.passed for r in reports)
    failures = [d for r in reports for d in r.failures]
    cases = sum(len(r.cases) for r in reports)
    _emit(args, {"k": k, "cases": cases, "failures": failures, "passed": ok},
          [f"cluster checks k={k}: {'PASS' if ok else 'FAIL'} cases={cases} failures={len(failures)}"]
          + [f"  {d}" for d in failures[:20]])
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swapalg", description="Swapping algebra calculator and verifier.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("--points", required=True, help="comma-separated names, anticlockwise")
    p.add_argument("--rank", type=int, help="reduce in the rank-N quotient")
    p.add_argument("--json", action="store_true")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bracket", help="bracket of two expressions")
    p.add_argument("--points", required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("reduce", help="normal form in the rank-N model")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("expr")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="+", metavar="suite", help=f"one of {', '.join(SUITES)} or 'all'")
    p.add_argument("--points", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cluster", help="triangulations, exchange matrices, flips, theta")
    p.add_argument("action", choices=("list", "epsilon", "flip", "theta", "check"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--edges", help="diagonals, e.g. 'v1v3;v1v4' (default: fan at v1)")
    p.add_argument("--edge", help="a single diagonal, e.g. v1v3")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cluster)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownSuite, BadParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivisionByZero, DenominatorVanishesInZn) as exc:
        print(f"evaluation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SwapAlgError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
