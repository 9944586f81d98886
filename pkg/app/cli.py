"""
Command-line front door.

    python -m app generate --family ktree --k 2 --n 100 --seed 1 \
      | python -m app layout track | python -m app draw balanced | python -m app stats

Artifacts go to stdout (or --output), logs to stderr. Exit codes: 0 ok,
1 an artifact failed its own verifier, 2 usage or input error, 3 resource limit.
"""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence, TextIO

from app.config import LOG_DATEFMT, LOG_FORMAT, LOG_LEVEL
from app.core import pipeline
from app.core.errors import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, BadParams, LayoutError
from app.core.export import to_csv, to_obj, to_svg
from app.core.oracles import ORACLES
from app.core.schemas import Envelope, parse_envelope, require
from app.core.tree_partition import build_tree_partition, verify_tree_partition

log = logging.getLogger("layout.cli")

GENERATOR_PARAMS = ("n", "k", "m", "rows", "cols", "legs", "a", "b")


# ── Parser ───────────────────────────────────────────────────────────

def _generator_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("inline graph")
    g.add_argument("--family", help="generate the input graph instead of reading it")
    g.add_argument("--k", type=int, help="k of the generated family; also the k of k-tree layout methods")
    for name in GENERATOR_PARAMS:
        if name == "k":
            continue
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--p", type=float, help="edge probability")
    g.add_argument("--seed", type=int)


def _io_flags(p: argparse.ArgumentParser, formats: Sequence[str] = ("json",)):
    p.add_argument("--input", "-i", help="input envelope (default: stdin)")
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracklayout", description="Track layouts, queue layouts and 3D drawings")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a graph")
    _generator_flags(p)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("layout", help="build a track, queue or stack layout")
    p.add_argument("kind", choices=("track", "queue", "stack"))
    p.add_argument("--method", default="auto")
    p.add_argument("--balance", help="t' for balancing (integer or fraction)")
    p.add_argument("--wrap", action="store_true")
    p.add_argument("--proper", action="store_true", help="convert an improper layout")
    _generator_flags(p)
    _io_flags(p)

    p = sub.add_parser("partition", help="tree-partition of a k-tree")
    p.add_argument("--root", type=int)
    p.add_argument("--relaxed", action="store_true", help="check the arbitrary-root width bound")
    _generator_flags(p)
    _io_flags(p)

    p = sub.add_parser("colour", help="acyclic colouring")
    _generator_flags(p)
    _io_flags(p)

    p = sub.add_parser("draw", help="three-dimensional grid drawing")
    p.add_argument("method", choices=pipeline.DRAW_METHODS)
    p.add_argument("--r", help="aspect parameter, a rational such as 3 or 3/2")
    _generator_flags(p)
    _io_flags(p, ("json", "obj", "svg"))

    p = sub.add_parser("verify", help="re-run a verifier")
    p.add_argument("kind", choices=pipeline.VERIFY_KINDS)
    _generator_flags(p)
    _io_flags(p)

    p = sub.add_parser("oracle", help="exact parameter of a small graph")
    p.add_argument("kind", choices=sorted(ORACLES))
    p.add_argument("--limit", type=int)
    _generator_flags(p)
    _io_flags(p)

    p = sub.add_parser("stats", help="CSV row of sizes, parameters and bound checks")
    _generator_flags(p)
    _io_flags(p, ("csv", "json"))
    return parser


# ── Commands ─────────────────────────────────────────────────────────

def _params(args) -> dict:
    out = {name: getattr(args, name) for name in GENERATOR_PARAMS if getattr(args, name, None) is not None}
    if getattr(args, "p", None) is not None:
        out["p"] = args.p
    return out


def _envelope(args, stdin: TextIO) -> Envelope:
    if getattr(args, "family", None):
        return pipeline.generate_envelope(args.family, _params(args), args.seed)
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            return parse_envelope(fh.read())
    text = stdin.read()
    if not text.strip():
        raise BadParams("no input: pass --family, --input or pipe an envelope")
    return parse_envelope(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def _execute(args, stdin: TextIO) -> tuple[str, int]:
    """(artifact text, exit code) for parsed arguments."""
    cmd = args.command
    if cmd == "generate":
        if not args.family:
            raise BadParams("generate needs --family")
        return _envelope(args, stdin).dumps(), EXIT_OK

    env = _envelope(args, stdin)
    if cmd == "layout":
        if args.kind == "track":
            env = pipeline.layout_track(env, args.method, args.k, args.balance, args.wrap, args.proper)
        elif args.kind == "queue":
            env = pipeline.layout_queue(env, args.method)
        else:
            env = pipeline.layout_stack(env)
        return env.dumps(), EXIT_OK

    if cmd == "partition":
        g = env.graph.build()
        k = args.k if args.k is not None else pipeline.chordal_width(g)
        tp = build_tree_partition(g, k, args.root)
        report = verify_tree_partition(g, tp, k, strict_width=not args.relaxed and args.root is None)
        report.raise_if_failed()
        return env.with_artifact("tree_partition", tp, report).dumps(), EXIT_OK

    if cmd == "colour":
        return pipeline.colour(env).dumps(), EXIT_OK

    if cmd == "draw":
        env = pipeline.draw(env, args.method, args.r)
        if args.format == "json":
            return env.dumps(), EXIT_OK
        g, d = env.graph.build(), require(env, "drawing")
        return (to_obj(g, d) if args.format == "obj" else to_svg(g, d, title=args.method)), EXIT_OK

    if cmd == "verify":
        report = pipeline.verify(env, args.kind, args.k)
        return _dump(report.to_dict()), EXIT_OK if report.ok else EXIT_VERIFY

    if cmd == "oracle":
        result = pipeline.oracle(env, args.kind, args.limit)
        return _dump(result.to_dict()), EXIT_OK

    row = pipeline.stats_row(env)
    return (to_csv([row]) if args.format == "csv" else _dump(row)), EXIT_OK


def run(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None,
        stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    logging.basicConfig(level=args.log_level.upper(), format=LOG_FORMAT, datefmt=LOG_DATEFMT,
                        stream=stderr, force=True)
    try:
        text, code = _execute(args, stdin)
    except LayoutError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        stderr.write(_dump(exc.to_dict()) + "\n")
        return exc.code
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_USAGE

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        stdout.write(text if text.endswith("\n") else text + "\n")
    return code


def main() -> int:
    return run()
