"""Seeded random regression graphs for tests, benchmarks and the acceptance suite."""

from __future__ import annotations

import random

from .errors import CycleViolation
from .graph import Edge, EdgeKind, RegressionGraph

_PATIENCE = 20


def _dashed_share(p_dashed: float, attempt: int, max_tries: int) -> float:
    # Dense draws are often rejected; after a while lean towards arrows, which
    # follow a node order and cannot close a cycle.  The last try has none.
    if attempt >= max_tries - 1:
        return 0.0
    if attempt < _PATIENCE:
        return p_dashed
    return p_dashed * (max_tries - 1 - attempt) / (max_tries - 1 - _PATIENCE)


def random_regression_graph(
    n: int,
    rng: random.Random,
    p_edge: float = 0.5,
    p_context: float = 0.3,
    p_dashed: float = 0.5,
    max_tries: int = 200,
) -> RegressionGraph:
    """Random valid regression graph on ``n`` nodes.

    Edge kinds follow the node types; response-response pairs get a dashed
    line or an arrow along a random node order.  Draws that close a
    semi-directed cycle are rejected.
    """
    for attempt in range(max_tries):
        share = _dashed_share(p_dashed, attempt, max_tries)
        context = {i for i in range(n) if rng.random() < p_context}
        rank = list(range(n))
        rng.shuffle(rank)
        edges = []
        for i in range(n):
            for k in range(i + 1, n):
                if rng.random() >= p_edge:
                    continue
                ci, ck = i in context, k in context
                if ci and ck:
                    edges.append(Edge(i, k, EdgeKind.FULL))
                elif ci:
                    edges.append(Edge(i, k, EdgeKind.ARROW))
                elif ck:
                    edges.append(Edge(k, i, EdgeKind.ARROW))
                elif rng.random() < share:
                    edges.append(Edge(i, k, EdgeKind.DASHED))
                elif rank[i] > rank[k]:
                    edges.append(Edge(i, k, EdgeKind.ARROW))
                else:
                    edges.append(Edge(k, i, EdgeKind.ARROW))
        try:
            return RegressionGraph([str(x + 1) for x in range(n)], context, edges)
        except CycleViolation:
            continue
    raise AssertionError("unreachable: the last attempt draws no dashed lines")


def random_dag(n: int, rng: random.Random, p_edge: float = 0.5) -> RegressionGraph:
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for x in range(n):
        for y in range(x + 1, n):
            if rng.random() < p_edge:
                edges.append(Edge(order[y], order[x], EdgeKind.ARROW))
    return RegressionGraph([str(x + 1) for x in range(n)], (), edges)


def random_retyping(
    g: RegressionGraph,
    rng: random.Random,
    p_context: float = 0.3,
    p_dashed: float = 0.5,
    max_tries: int = 200,
) -> RegressionGraph:
    """Random regression graph with the same skeleton as ``g``."""
    pairs = [e.pair for e in g.edges()]
    n = g.n
    for attempt in range(max_tries):
        share = _dashed_share(p_dashed, attempt, max_tries)
        context = {i for i in range(n) if rng.random() < p_context}
        rank = list(range(n))
        rng.shuffle(rank)
        edges = []
        for i, k in pairs:
            ci, ck = i in context, k in context
            if ci and ck:
                edges.append(Edge(i, k, EdgeKind.FULL))
            elif ci:
                edges.append(Edge(i, k, EdgeKind.ARROW))
            elif ck:
                edges.append(Edge(k, i, EdgeKind.ARROW))
            elif rng.random() < share:
                edges.append(Edge(i, k, EdgeKind.DASHED))
            elif rank[i] > rank[k]:
                edges.append(Edge(i, k, EdgeKind.ARROW))
            else:
                edges.append(Edge(k, i, EdgeKind.ARROW))
        try:
            return RegressionGraph(g.labels, context, edges)
        except CycleViolation:
            continue
    raise AssertionError("unreachable: the last attempt draws no dashed lines")


def random_orientable_graph(
    n: int,
    n_edges: int,
    rng: random.Random,
    context_fraction: float = 0.2,
    max_component: int = 4,
) -> RegressionGraph:
    """Random graph meeting the orientation precondition, with at most ``n_edges`` edges.

    The context block is grown as a chordal graph (each new node joins part
    of an existing clique).  Response components are small dashed graphs;
    arrows come from later components.  About 15% more edges than asked for
    are drawn; chordless collision paths in four nodes are then broken by
    dropping one of their outer edges, and surplus arrows are dropped at
    random, so the count usually lands on ``n_edges`` exactly.
    """
    from .equivalence import iter_collision_paths4

    n_ctx = max(1, int(n * context_fraction)) if n > 1 else 0
    ctx = list(range(n - n_ctx, n))
    edges: dict[tuple[int, int], Edge] = {}
    cliques: list[list[int]] = []
    for x in ctx:
        if cliques and rng.random() < 0.8:
            base = rng.choice(cliques)
            part = rng.sample(base, rng.randint(1, len(base)))
            for y in part:
                edges[(min(x, y), max(x, y))] = Edge(min(x, y), max(x, y), EdgeKind.FULL)
            cliques.append(part + [x])
        else:
            cliques.append([x])
    # response components in generation order: later index = later component
    resp = list(range(n - n_ctx))
    comps: list[list[int]] = []
    i = 0
    while i < len(resp):
        size = rng.randint(1, max_component)
        comps.append(resp[i : i + size])
        i += size
    for comp in comps:
        for a in range(len(comp)):
            for b in range(a + 1, len(comp)):
                if b == a + 1 or rng.random() < 0.5:
                    x, y = comp[a], comp[b]
                    edges[(x, y)] = Edge(x, y, EdgeKind.DASHED)
    comp_of = {x: c for c, comp in enumerate(comps) for x in comp}
    remaining = int(n_edges * 1.15) - len(edges)
    attempts = 0
    while remaining > 0 and attempts < 50 * n_edges and comps:
        attempts += 1
        c = rng.randrange(len(comps))
        tail = rng.randrange(n)
        if tail in comp_of and comp_of[tail] <= c:
            continue
        # shared parents keep most arrow pairs from opening collision paths
        heads = comps[c] if rng.random() < 0.9 else [rng.choice(comps[c])]
        for head in heads:
            key = (min(head, tail), max(head, tail))
            if key not in edges and remaining > 0:
                edges[key] = Edge(tail, head, EdgeKind.ARROW)
                remaining -= 1
    labels = [str(x + 1) for x in range(n)]
    g = RegressionGraph(labels, ctx, edges.values())
    while (path := next(iter_collision_paths4(g), None)) is not None:
        k0, k1, k2, k3 = path.nodes
        drop = (min(k0, k1), max(k0, k1)) if rng.random() < 0.5 else (min(k2, k3), max(k2, k3))
        del edges[drop]
        g = RegressionGraph(labels, ctx, edges.values())
    # trim surplus arrows one at a time, keeping only removals that stay orientable
    arrows = sorted(k for k, e in edges.items() if e.kind is EdgeKind.ARROW)
    rng.shuffle(arrows)
    for key in arrows:
        if len(edges) <= n_edges:
            break
        removed = edges.pop(key)
        trial = RegressionGraph(labels, ctx, edges.values())
        if next(iter_collision_paths4(trial), None) is not None:
            edges[key] = removed
        else:
            g = trial
    return g
