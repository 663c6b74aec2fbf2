"""Plain-text graph files and DOT export.

File grammar, one item per line::

    # comment (anywhere, runs to end of line)
    nodes: A B C        optional; fixes the first node indices
    context: P Q        optional; absent means no context nodes
    A -> B              arrow from A to B
    P -- Q              full line (context nodes only)
    A ~~ C              dashed line (response nodes only)

Tokens are separated by whitespace.  Labels never declared on a ``nodes:``
line are registered in order of first appearance.
"""

from __future__ import annotations

from .errors import DuplicateEdge, EdgeTypeViolation, GraphError, GraphSyntaxError, SelfLoop
from .graph import Edge, EdgeKind, RegressionGraph

OPERATORS = {"->": EdgeKind.ARROW, "--": EdgeKind.FULL, "~~": EdgeKind.DASHED}
KEYWORDS = ("nodes:", "context:")


def _column(raw: str, token_index: int) -> int:
    col, seen, in_token = 0, -1, False
    for col, ch in enumerate(raw, start=1):
        if ch.isspace():
            in_token = False
        elif not in_token:
            in_token = True
            seen += 1
            if seen == token_index:
                return col
    return len(raw) + 1


def parse(text: str) -> RegressionGraph:
    labels: list[str] = []
    index: dict[str, int] = {}

    def register(lab: str) -> int:
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        return index[lab]

    context: set[int] = set()
    edges: list[tuple[Edge, int]] = []
    seen_pairs: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = body.split()
        if not tokens:
            continue
        head = tokens[0]
        if head in KEYWORDS:
            for t_i, lab in enumerate(tokens[1:], start=1):
                if lab in OPERATORS or lab in KEYWORDS:
                    raise GraphSyntaxError(f"unexpected token {lab!r}", line=lineno, column=_column(raw, t_i))
                x = register(lab)
                if head == "context:":
                    context.add(x)
            continue
        if len(tokens) != 3 or tokens[1] not in OPERATORS:
            if len(tokens) >= 2 and tokens[1] not in OPERATORS:
                bad = 1
            else:
                bad = min(len(tokens), 3)
            raise GraphSyntaxError(
                "expected '<label> <op> <label>' with op one of ->, --, ~~",
                line=lineno,
                column=_column(raw, bad),
            )
        a, op, b = tokens
        for t_i, lab in ((0, a), (2, b)):
            if lab in OPERATORS or lab in KEYWORDS:
                raise GraphSyntaxError(f"unexpected token {lab!r}", line=lineno, column=_column(raw, t_i))
        u, v = register(a), register(b)
        if u == v:
            raise SelfLoop(f"self-loop at {a}", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            raise DuplicateEdge(
                f"more than one edge between {a} and {b} (first on line {seen_pairs[key]})", line=lineno
            )
        seen_pairs[key] = lineno
        edges.append((Edge(u, v, OPERATORS[op]), lineno))

    for e, lineno in edges:
        cu, cv = e.u in context, e.v in context
        a, b = labels[e.u], labels[e.v]
        if e.kind is EdgeKind.FULL and not (cu and cv):
            raise EdgeTypeViolation(f"full line {a} -- {b} touches a response node", line=lineno)
        if e.kind is EdgeKind.DASHED and (cu or cv):
            raise EdgeTypeViolation(f"dashed line {a} ~~ {b} touches a context node", line=lineno)
        if e.kind is EdgeKind.ARROW and cv:
            raise EdgeTypeViolation(f"arrow {a} -> {b} points to a context node", line=lineno)
    return RegressionGraph(labels, context, (e for e, _ in edges))


def _edge_line(g: RegressionGraph, e: Edge) -> tuple[str, str, str]:
    a, b = g.labels[e.u], g.labels[e.v]
    if e.kind is not EdgeKind.ARROW and b < a:
        a, b = b, a
    return (a, b, e.kind.token)


def serialize(g: RegressionGraph) -> str:
    """Canonical text: sorted labels, sorted context, edges sorted by endpoint labels."""
    lines = ["nodes:" + "".join(" " + lab for lab in sorted(g.labels))]
    lines.append("context:" + "".join(" " + lab for lab in sorted(g.labels[i] for i in g.context)))
    for a, b, tok in sorted(_edge_line(g, e) for e in g.edges()):
        lines.append(f"{a} {tok} {b}")
    return "\n".join(lines) + "\n"


def as_triples(g: RegressionGraph) -> tuple[frozenset[str], frozenset[str], frozenset[tuple[str, str, str]]]:
    """Label-level view of a graph, independent of node indices."""
    return (
        frozenset(g.labels),
        frozenset(g.labels[i] for i in g.context),
        frozenset(_edge_line(g, e) for e in g.edges()),
    )


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: RegressionGraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for lab in sorted(g.labels):
        attrs = " [shape=box]" if g.index(lab) in g.context else ""
        lines.append(f"  {_dot_id(lab)}{attrs};")
    for a, b, tok in sorted(_edge_line(g, e) for e in g.edges()):
        if tok == "->":
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
        elif tok == "~~":
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [dir=none, style=dashed];")
        else:
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [dir=none, style=solid];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["GraphError", "as_triples", "export_dot", "parse", "serialize"]
