"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 point not on the variety, 4 descent stuck.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from . import serialize as ser
from .core import Params, StructuralError, NotOnVariety, classify, flip_first, height, make_point
from .enumeration import enumerate_fd, enumerate_solutions, orbit_graph
from .reduction import ReductionStuck, equivalence_word, reduce
from .verification import markoff_compat_check, verify_fundamental_domain

log = logging.getLogger("markoff_hurwitz")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_ON_VARIETY, EXIT_STUCK = 0, 1, 2, 3, 4

FORMATS = {
    "reduce": ("json", "csv", "text"),
    "equiv": ("json", "text"),
    "solve": ("json", "csv", "text"),
    "fd": ("json", "csv", "text"),
    "orbits": ("json", "csv", "text"),
    "graph": ("json", "dot", "text"),
    "verify": ("json", "text"),
}


class UsageError(Exception):
    pass


def _parse_point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}: expected comma-separated integers")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=int, required=True, help="coefficient of the product term")
    common.add_argument("--k", type=int, required=True, help="level")
    common.add_argument("--n", type=int, required=True, help="number of variables")
    common.add_argument("--format", default=None, choices=("json", "csv", "dot", "text"))
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None, help="write output to FILE")

    parser = argparse.ArgumentParser(
        prog="markoff-hurwitz",
        description="Fundamental domains for x_1^2+...+x_n^2 - a x_1...x_n = k.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="reduce a solution to the fundamental domain")
    p.add_argument("--point", required=True)

    p = sub.add_parser("equiv", parents=[common], help="decide whether two solutions share an orbit")
    p.add_argument("--point", action="append", required=True)

    p = sub.add_parser("solve", parents=[common], help="all normal solutions up to a height")
    p.add_argument("--height-max", type=int, required=True)

    p = sub.add_parser("fd", parents=[common], help="fundamental-domain members")
    p.add_argument("--cap", type=int, default=100)

    p = sub.add_parser("orbits", parents=[common], help="orbit partition of bounded solutions")
    p.add_argument("--height-max", type=int, required=True)

    p = sub.add_parser("graph", parents=[common], help="orbit graph export")
    p.add_argument("--height-max", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="brute-force fundamental-domain checks")
    p.add_argument("--height-max", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000, help="random samples for the Markoff identities")
    return parser


def _setup_logging() -> None:
    level = os.environ.get("MH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)


def _params(args) -> tuple[Params, Params, Optional[str]]:
    """Validated parameters, the positive-a parameters actually used, and a notice."""
    try:
        original = Params(args.a, args.k, args.n)
    except StructuralError as exc:
        raise UsageError(str(exc))
    if original.a > 0:
        return original, original, None
    used = Params(-original.a, original.k, original.n)
    notice = (f"a={original.a} < 0: x_1 negated, working on V({used.a}, {used.k}, {used.n})")
    return original, used, notice


def _envelope(command: str, original: Params, used: Params, notice: Optional[str]) -> dict:
    out = {"command": command, "params": ser.params_to_json(used)}
    if notice:
        out["notice"] = notice
        out["input_params"] = ser.params_to_json(original)
    return out


def _warn_open(graph) -> None:
    opened = [c for c in graph.components if c.open]
    if opened:
        log.warning("%d of %d components have Vieta neighbours above the height bound; "
                    "they may join outside it", len(opened), len(graph.components))


def _points_for(args, original: Params, used: Params) -> list[tuple[int, ...]]:
    raw = args.point if isinstance(args.point, list) else [args.point]
    pts = []
    for text in raw:
        p = _parse_point(text)
        if len(p) != original.n:
            raise UsageError(f"point {text!r} has {len(p)} coordinates, expected {original.n}")
        make_point(p, original)
        pts.append(flip_first(p) if original.a < 0 else p)
    return pts


def run(args) -> tuple[int, str]:
    original, used, notice = _params(args)
    fmt = args.format or ("dot" if args.command == "graph" else "json")
    if fmt not in FORMATS[args.command]:
        raise UsageError(f"format {fmt!r} is not available for {args.command}")
    if notice:
        log.info(notice)
    env = _envelope(args.command, original, used, notice)
    cmd = args.command

    if cmd == "reduce":
        (p,) = _points_for(args, original, used)
        res = reduce(p, used)
        if fmt == "csv":
            return EXIT_OK, ser.rows_to_csv([(res.representative, res.stratum.value)])
        env.update(input=ser.point_to_json(p), **ser.reduction_to_json(res))
        if fmt == "text":
            lines = [f"input {p}", f"representative {res.representative}",
                     f"stratum {res.stratum.value}", f"vieta steps {res.vieta_steps}",
                     f"height {res.initial_height} -> {res.final_height}"]
            if notice:
                lines.insert(0, notice)
            return EXIT_OK, "\n".join(lines) + "\n"
        return EXIT_OK, ser.dumps(env)

    if cmd == "equiv":
        pts = _points_for(args, original, used)
        if len(pts) != 2:
            raise UsageError("equiv needs exactly two --point arguments")
        word = equivalence_word(pts[0], pts[1], used)
        env.update(points=[ser.point_to_json(q) for q in pts], equivalent=word is not None,
                   word=None if word is None else ser.word_to_json(word))
        if fmt == "text":
            return EXIT_OK, f"{str(word is not None).lower()}\n" + (
                "" if word is None else " ".join(_move_text(m) for m in word) + "\n")
        return EXIT_OK, ser.dumps(env)

    if cmd == "solve":
        sols = enumerate_solutions(used, args.height_max, args.workers)
        if fmt == "csv":
            return EXIT_OK, ser.rows_to_csv((q, classify(q, used).value) for q in sols.points)
        if fmt == "text":
            return EXIT_OK, "".join(f"{q} h={height(q)}\n" for q in sols.points)
        env.update(ser.solutions_to_json(sols))
        return EXIT_OK, ser.dumps(env)

    if cmd == "fd":
        fd = enumerate_fd(used, args.cap)
        if fd.truncated:
            log.warning("positive search reached cap %d before closing; output may be incomplete",
                        args.cap)
        if fmt == "csv":
            rows = [(q, tag.value) for q, tag in fd.finite_members]
            for fam in fd.infinite_families:
                rows += [(q, fam.stratum.value) for q in fam.members(fd.cap)]
            return EXIT_OK, ser.rows_to_csv(rows)
        if fmt == "text":
            lines = [f"{q} {tag.value}" for q, tag in fd.finite_members]
            lines += [f"family ({fam.pattern}) for x >= {fam.x_min} {fam.stratum.value}"
                      for fam in fd.infinite_families]
            return EXIT_OK, "\n".join(lines) + ("\n" if lines else "")
        env.update(ser.fd_to_json(fd))
        return EXIT_OK, ser.dumps(env)

    if cmd in ("orbits", "graph"):
        g = orbit_graph(used, args.height_max, args.workers)
        _warn_open(g)
        if cmd == "orbits":
            if fmt == "csv":
                return EXIT_OK, ser.rows_to_csv(
                    (c.representative, c.stratum.value) for c in g.components
                    if c.representative is not None)
            if fmt == "text":
                return EXIT_OK, "".join(
                    f"{c.representative} {c.stratum.value}{' open' if c.open else ''}: "
                    f"{len(c.vertices)} vertices\n" for c in g.components)
            env.update(ser.orbits_to_json(g))
            return EXIT_OK, ser.dumps(env)
        if fmt == "dot":
            return EXIT_OK, ser.graph_to_dot(g)
        if fmt == "text":
            return EXIT_OK, "".join(f"{e.source} -[{e.i}]- {e.target}\n" for e in g.edges)
        env.update(ser.graph_to_json(g))
        return EXIT_OK, ser.dumps(env)

    if cmd == "verify":
        reports = [verify_fundamental_domain(used, args.height_max, args.workers),
                   markoff_compat_check(args.samples)]
        ok = all(r.passed for r in reports)
        code = EXIT_OK if ok else EXIT_FAIL
        if fmt == "text":
            return code, "\n".join(line for r in reports for line in r.lines()) + "\n"
        env.update(passed=ok, reports=[ser.report_to_json(r) for r in reports])
        return code, ser.dumps(env)

    raise UsageError(f"unknown command {cmd}")


def _move_text(m) -> str:
    move = ser.move_to_json(m)
    (key, value), = move.items()
    return f"{key}{value}".replace(" ", "")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotOnVariety as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ON_VARIETY
    except ReductionStuck as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STUCK
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
