"""Command-line front end: ``copbound <subcommand> ...``.

Exit codes: 0 success, 1 bound violation or unsound strategy, 2 operational
error (bad input, unknown generator, budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .errors import BudgetExceeded, CopboundError, NotApplicable
from .game import cop_number, play
from .graph import (
    INFINITE_GIRTH,
    diameter,
    encode_graph6,
    from_generator,
    girth,
    is_connected,
    min_degree,
    parse_graph6,
    read_graph6_file,
)
from .harness import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_VIOLATION,
    Predicate,
    certify_equality,
    check_bounds,
    search_extremal,
    verify_corpus,
)
from .invariants import domination_number, independence_number
from .strategies import BestResponseRobber, dominating_set_strategy, synthesize, validate_strategy

log = logging.getLogger("copbound")


def load_graph(args):
    if args.g6:
        return parse_graph6(args.g6)
    if args.gen:
        return from_generator(args.gen)
    for _, g, _ in read_graph6_file(args.file):
        if isinstance(g, Exception):
            raise g
        return g
    raise CopboundError(f"{args.file} contains no graph")


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_invariants(args) -> int:
    g = load_graph(args)
    alpha, a_wit = independence_number(g)
    gamma, g_wit = domination_number(g)
    gir = girth(g)
    connected = is_connected(g)
    payload = {
        "graph6": encode_graph6(g),
        "n": g.n,
        "diameter": diameter(g) if connected else None,
        "alpha": alpha,
        "gamma": gamma,
        "girth": None if gir == INFINITE_GIRTH else gir,
        "minDegree": min_degree(g),
        "alphaWitness": list(a_wit.vertices),
        "gammaWitness": list(g_wit.vertices),
    }
    rows = [
        ("n", g.n),
        ("diameter", payload["diameter"] if connected else "disconnected"),
        ("alpha", alpha),
        ("gamma", gamma),
        ("girth", "inf" if gir == INFINITE_GIRTH else gir),
        ("min degree", payload["minDegree"]),
    ]
    _emit(args, payload, "\n".join(f"{k:<11}{v}" for k, v in rows))
    return EXIT_OK


def cmd_copnumber(args) -> int:
    g = load_graph(args)
    c = cop_number(g, k_max=args.kmax, budget=args.budget)
    _emit(args, {"graph6": encode_graph6(g), "copNumber": c}, str(c))
    return EXIT_OK


def cmd_bounds(args) -> int:
    g = load_graph(args)
    report = check_bounds(g, args.budget)
    payload = report.to_dict()
    lines = [f"n={report.n} D={report.diameter} alpha={report.alpha} gamma={report.gamma} "
             f"c={'?' if report.cop_number is None else report.cop_number}"]
    for t in report.theorems:
        if not t.applicable:
            lines.append(f"theorem {t.id}: not applicable")
            continue
        mark = {True: "ok", False: "VIOLATED", None: "unknown c"}[t.satisfied]
        lines.append(f"theorem {t.id}: c <= {t.bound}  {mark}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_VIOLATION if report.violated else EXIT_OK


def cmd_strategy(args) -> int:
    g = load_graph(args)
    note = None
    try:
        s = synthesize(g, args.theorem)
    except NotApplicable as exc:
        note = f"theorem {args.theorem} not applicable ({exc}); using dominating-set placement"
        s = dominating_set_strategy(g)
    payload = {"graph6": encode_graph6(g), "theorem": args.theorem, "cops": s.cop_count,
               "placement": list(s.placement), "fallback": note is not None}
    lines = [note] if note else []
    lines.append(f"cops: {s.cop_count}")
    lines.append(f"placement: {','.join(map(str, s.placement))}")
    code = EXIT_OK
    if args.validate:
        verdict = validate_strategy(g, s, args.turn_limit, args.budget or 2_000_000)
        payload["verdict"] = verdict.result
        payload["maxCaptureTurns"] = verdict.max_capture_turns
        lines.append(f"verdict: {verdict.result.capitalize()}"
                     + (f" (capture within {verdict.max_capture_turns} cop moves)" if verdict.sound else ""))
        if verdict.result == "unsound":
            payload["escapeWitness"] = list(verdict.escape_witness)
            code = EXIT_VIOLATION
        elif verdict.result == "inconclusive":
            code = EXIT_ERROR
        if verdict.values is not None:
            transcript = play(g, s, BestResponseRobber(s, verdict), args.turn_limit)
            payload["transcript"] = transcript.to_text()
            lines.append(transcript.to_text().rstrip())
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_verify(args) -> int:
    report = verify_corpus(args.corpus, args.budget, args.strategies, args.jobs)
    text = report.to_jsonl()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.json or not args.output:
        sys.stdout.write(text)
    else:
        s = report.summary()["summary"]
        print(f"graphs {s['graphs']}  violations {s['violations']}  errors {s['errors']}")
    return report.exit_code


def cmd_certify(args) -> int:
    g = load_graph(args)
    cert = certify_equality(g, args.budget)
    _emit(args, cert.to_dict(), cert.describe())
    return EXIT_OK


def cmd_search(args) -> int:
    predicate = Predicate(args.equality, args.min_value, args.min_diameter, args.max_diameter)
    result = search_extremal(args.corpus, predicate, args.budget, args.time_budget, args.jobs)
    payload = {"witnesses": result.witnesses, "examined": result.examined,
               "exhausted": result.exhausted, "watermark": result.watermark}
    lines = [f"{w['graph6']}  n={w['n']} D={w['diameter']} alpha={w['alpha']} gamma={w['gamma']} "
             f"c={w['copNumber']}" for w in result.witnesses]
    lines.append(f"{len(result.witnesses)} witnesses among {result.examined} graphs")
    if result.exhausted:
        lines.append(f"stopped at graph index {result.watermark}: {result.reason}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_ERROR if result.exhausted else EXIT_OK


def _graph_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--g6", help="graph6 string")
    src.add_argument("--file", help="graph6 file (first graph is used)")
    src.add_argument("--gen", help="generator: path:n, cycle:n, complete:n, petersen, paley:q, hoffman-singleton")


def _positive(text):
    value = int(float(text))
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--budget", type=_positive, default=None,
                        help="game state budget (default: $COPBOUND_STATE_BUDGET or 5e7)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="copbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="n, D, alpha, gamma, girth, min degree")
    _graph_args(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("copnumber", parents=[common], help="exact cop number")
    _graph_args(p)
    p.add_argument("--kmax", type=_positive, default=None)
    p.set_defaults(func=cmd_copnumber)

    p = sub.add_parser("bounds", parents=[common], help="check the four diameter inequalities")
    _graph_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("strategy", parents=[common], help="synthesize a cop strategy")
    _graph_args(p)
    p.add_argument("--theorem", type=int, choices=[1, 2, 3, 4], required=True)
    p.add_argument("--validate", action="store_true", help="exhaustive robber best-response check")
    p.add_argument("--turn-limit", type=_positive, default=10_000)
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("verify", parents=[common], help="check every graph of a graph6 corpus")
    p.add_argument("corpus")
    p.add_argument("--strategies", action="store_true", help="also synthesize and validate strategies")
    p.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: all cores)")
    p.add_argument("-o", "--output", help="write the JSON-lines report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", parents=[common], help="certify c by girth/degree sandwich or exact solve")
    _graph_args(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", parents=[common], help="find graphs with c = alpha or c = gamma")
    p.add_argument("corpus")
    p.add_argument("--equality", choices=["alpha", "gamma"], required=True)
    p.add_argument("--min-diameter", type=int, default=0)
    p.add_argument("--max-diameter", type=int, default=None)
    p.add_argument("--min-value", type=int, default=1)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--jobs", type=_positive, default=None)
    p.set_defaults(func=cmd_search)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CopboundError, BudgetExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
