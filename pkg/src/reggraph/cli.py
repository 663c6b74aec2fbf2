"""Command line front end.

Exit codes: 0 success (or "separated" / "equivalent"), 1 domain error or
negative verdict, 2 usage or file error.  Results go to stdout, one record
per line; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .equivalence import classify, markov_equivalent
from .errors import GraphError
from .gaussian import faithfulness_check
from .graph import RegressionGraph
from .orientation import orient_to_dag
from .separation import pairwise_independences, separates
from .textio import export_dot, parse, serialize


class _FileError(Exception):
    pass


def _load(path: str) -> RegressionGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _FileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise _FileError(f"cannot decode {path} as UTF-8") from exc
    return parse(text)


def _label_list(g: RegressionGraph, raw: str) -> frozenset[int]:
    return g.indices(lab for lab in raw.split(",") if lab.strip() != "")


def _cmd_validate(args, out, err) -> int:
    try:
        _load(args.file)
    except GraphError as exc:
        print(f"{exc.kind}: {exc}", file=out)
        return 1
    print("valid", file=out)
    return 0


def _cmd_independences(args, out, err) -> int:
    g = _load(args.file)
    for s in pairwise_independences(g):
        print(s.format(g.labels), file=out)
    return 0


def _cmd_separate(args, out, err) -> int:
    g = _load(args.file)
    a, b, c = (_label_list(g, x) for x in (args.a, args.b, args.c))
    if separates(g, a, b, c):
        print("separated", file=out)
        return 0
    print("connected", file=out)
    return 1


def _cmd_equivalent(args, out, err) -> int:
    g1, g2 = _load(args.file1), _load(args.file2)
    rep = markov_equivalent(g1, g2)
    print(rep.describe(g1.labels), file=out)
    return 0 if rep.equivalent else 1


def _cmd_classify(args, out, err) -> int:
    g = _load(args.file)
    for line in classify(g).to_lines():
        print(line, file=out)
    return 0


def _cmd_orient(args, out, err) -> int:
    g = _load(args.file)
    res = orient_to_dag(g)
    out.write(serialize(res.dag))
    if args.trace:
        for line in res.trace_lines():
            print(line, file=err)
    return 0


def _cmd_gaussian_check(args, out, err) -> int:
    g = _load(args.file)
    rep = faithfulness_check(g, args.seed, args.draws, args.tol_zero, args.tol_nonzero)
    for line in rep.to_lines(g.labels):
        print(line, file=out)
    return 0 if rep.ok else 1


def _cmd_dot(args, out, err) -> int:
    out.write(export_dot(_load(args.file)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reggraph", description="Regression graph toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a graph file")
    s.add_argument("file")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("independences", help="list the defining pairwise independences")
    s.add_argument("file")
    s.set_defaults(func=_cmd_independences)

    s = sub.add_parser("separate", help="decide a _||_ b | c")
    s.add_argument("file")
    s.add_argument("--a", required=True, help="comma-separated labels")
    s.add_argument("--b", required=True, help="comma-separated labels")
    s.add_argument("--c", default="", help='comma-separated labels; "" for the empty set')
    s.set_defaults(func=_cmd_separate)

    s = sub.add_parser("equivalent", help="Markov equivalence of two graphs")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=_cmd_equivalent)

    s = sub.add_parser("classify", help="membership in neighbouring model classes")
    s.add_argument("file")
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("orient", help="Markov equivalent directed acyclic graph")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true", help="log every rewrite to stderr")
    s.set_defaults(func=_cmd_orient)

    s = sub.add_parser("gaussian-check", help="compare separation with vanishing partial covariances")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--draws", type=int, default=5)
    s.add_argument("--tol-zero", type=float, default=1e-8)
    s.add_argument("--tol-nonzero", type=float, default=1e-6)
    s.set_defaults(func=_cmd_gaussian_check)

    s = sub.add_parser("dot", help="export Graphviz DOT")
    s.add_argument("file")
    s.set_defaults(func=_cmd_dot)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except _FileError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except GraphError as exc:
        print(f"{exc.kind}: {exc}", file=err)
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
