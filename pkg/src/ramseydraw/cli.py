"""Command-line entry points and the UI bridge service.

Commands:

  play     interactive game, human plays P1 on standard input
  verify   exhaustive or stochastic adversarial verification
  solve    exact minimax on a small strong game
  explain  annotate a JSONL trace with case labels and ledgers
  serve    HTTP+JSON bridge for the web playground

All standard output is line-delimited JSON or a single JSON document.
Exit codes: 0 verification safe / success, 1 violation found, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import oracle, verifier
from .board import BoardTooSmall, IllegalMove, TurnError, edge_from_text


def _seed(args) -> int:
    env = os.environ.get("RAMSEY_SEED")
    if env is not None:
        return int(env)
    return args.seed


def cmd_play(args) -> int:
    p = verifier.Playout(args.n, game=args.game, checks=True)
    print(json.dumps({"event": "ready", "game": args.game, "n": args.n}),
          flush=True)
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            before = len(p.trace)
            if line == "stop":
                p.p1_stop()
            else:
                p.p1_move(edge_from_text(line))
        except (IllegalMove, TurnError) as exc:
            print(json.dumps({"event": "error", "error": str(exc)}),
                  flush=True)
            continue
        except BoardTooSmall as exc:
            print(json.dumps({"event": "finding", "error": str(exc)}),
                  flush=True)
            break
        except verifier.Violation as exc:
            print(json.dumps({"event": "violation", "error": str(exc)}),
                  flush=True)
            return 1
        for rec in p.trace[before:]:
            print(json.dumps(rec), flush=True)
        if args.trace:
            with open(args.trace, "w") as fh:
                for rec in p.trace:
                    fh.write(json.dumps(rec) + "\n")
        if p.done:
            print(json.dumps({"event": "finished", "winner": p.winner}),
                  flush=True)
            break
    return 0


def cmd_verify(args) -> int:
    if args.mode == "exhaustive":
        verdict = verifier.exhaustive_verify(args.n, args.depth,
                                             game=args.game)
    else:
        verdict = verifier.stochastic_verify(args.n, args.playouts,
                                             args.budget, _seed(args),
                                             game=args.game)
    print(json.dumps(verdict.to_json(), default=str))
    if args.trace and verdict.violations:
        with open(args.trace, "w") as fh:
            for rec in verdict.violations[0]["trace"]:
                fh.write(json.dumps(rec) + "\n")
    return 0 if verdict.result == "safe" else 1


def cmd_solve(args) -> int:
    targets = {"triangle": oracle.TRIANGLE, "book4": oracle.BOOK4,
               "book4-lifted": oracle.BOOK4_LIFTED}
    target = targets[args.target]
    board_spec = (args.board, args.n)
    try:
        res = oracle.oracle_solve(board_spec, target, args.budget,
                                  target_name=args.target)
    except oracle.ResourceExceeded as exc:
        print(json.dumps({"error": str(exc)}))
        return 1
    print(json.dumps({
        "board": list(board_spec), "target": args.target,
        "budget": res.budget, "value": res.value, "nodes": res.nodes,
        "memo_hits": res.memo_hits, "short_circuit": res.short_circuit,
    }))
    return 0


def cmd_explain(args) -> int:
    from .strategy import explain
    with open(args.trace_file) as fh:
        lines = fh.readlines()
    try:
        annotated = explain(lines)
    except ValueError as exc:
        print(json.dumps({"error": str(exc)}))
        return 2
    for rec in annotated:
        print(json.dumps(rec))
    return 0


def cmd_serve(args) -> int:
    from .server import serve
    serve(args.port, default_n=args.n)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ramseydraw",
        description="Strong Ramsey game drawing strategies and verifier")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--game", choices=("graph", "hyper"), default="graph")
        p.add_argument("--n", type=int, default=14)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trace", help="write the trace / first violation "
                       "trace to this JSONL file")

    p = sub.add_parser("play", help="interactive game, human is P1")
    common(p)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("verify", help="adversarial verification")
    common(p)
    p.add_argument("--depth", type=int, default=None,
                   help="exhaustive P1-move depth")
    p.add_argument("--playouts", type=int, default=None,
                   help="stochastic playout count")
    p.add_argument("--budget", type=int, default=12,
                   help="P1 move budget per stochastic playout")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("solve", help="exact minimax oracle")
    p.add_argument("--board", choices=("clique", "two-cliques", "hyper4"),
                   default="two-cliques")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--target", choices=("triangle", "book4", "book4-lifted"),
                   default="book4")
    p.add_argument("--budget", type=int, default=16)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("explain", help="annotate a trace file")
    p.add_argument("trace_file")
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("serve", help="HTTP bridge for the playground UI")
    common(p)
    p.add_argument("--port", type=int, default=8787)
    p.set_defaults(fn=cmd_serve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        if args.depth is None and args.playouts is None:
            ap.error("verify needs --depth (exhaustive) or --playouts")
        args.mode = "exhaustive" if args.depth is not None else "stochastic"
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
