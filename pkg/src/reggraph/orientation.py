"""Orienting a regression graph into a Markov equivalent directed acyclic graph.

The rewrite runs in five stages, each to a fixed point before the next:

1. maximum cardinality search on every full-line block;
2. full lines become arrows from the higher to the lower number;
3. collision Vs with a dashed line become sink Vs;
4. dashed triangles become sink paths;
5. the remaining dashed lines become arrows from higher to lower number.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .equivalence import dag_orientable, markov_equivalent, max_cardinality_search
from .errors import CycleViolation, DuplicateEdge, InternalInvariantViolation, NotOrientable, SelfLoop
from .graph import Edge, EdgeKind, RegressionGraph, UndirectedGraph, skeleton
from .oracle import MAX_SINGLETON_NODES, structures_equal
from .separation import collision_vs


@dataclass(frozen=True)
class Rewrite:
    step: int
    before: Edge
    after: Edge

    def format(self, labels) -> str:
        def show(e: Edge) -> str:
            return f"{labels[e.u]}{e.kind.token}{labels[e.v]}"

        return f"step {self.step}: {show(self.before)} => {show(self.after)}"


@dataclass
class OrientationResult:
    """All-arrow output.  ``arrows`` is kept as a raw edge list so that a
    corrupted result (say, with a cycle) can still be handed to
    :func:`verify_orientation`."""

    labels: tuple[str, ...]
    arrows: tuple[Edge, ...]
    labeling: dict[int, int]
    steps_log: list[Rewrite] = field(default_factory=list)

    @property
    def dag(self) -> RegressionGraph:
        return RegressionGraph(self.labels, (), self.arrows)

    def trace_lines(self) -> list[str]:
        return [r.format(self.labels) for r in self.steps_log]


class _State:
    """Mutable edge table used while rewriting."""

    def __init__(self, g: RegressionGraph):
        self.g = g
        self.edges: dict[tuple[int, int], Edge] = {e.pair: e for e in g.edges()}
        self.parents = [set(p) for p in g.parents]
        self.dashed = [set(d) for d in g.dashed_nbrs]
        self.log: list[Rewrite] = []

    def orient(self, step: int, tail: int, head: int) -> None:
        key = (tail, head) if tail < head else (head, tail)
        before = self.edges[key]
        after = Edge(tail, head, EdgeKind.ARROW)
        if before == after:
            return
        if before.kind is EdgeKind.ARROW:
            raise InternalInvariantViolation("attempt to flip an existing arrow")
        self.edges[key] = after
        self.parents[head].add(tail)
        if before.kind is EdgeKind.DASHED:
            self.dashed[tail].discard(head)
            self.dashed[head].discard(tail)
        self.log.append(Rewrite(step, before, after))

    def has_head(self, at: int, other: int) -> bool:
        return other in self.parents[at] or other in self.dashed[at]


def _context_ranks(g: RegressionGraph, first_rank: int) -> tuple[dict[int, int], int]:
    ranks: dict[int, int] = {}
    nxt = first_rank
    blocks = [c for c in g.ordered_components() if min(c) in g.context]
    for block in reversed(blocks):
        members = sorted(block)
        local = {x: t for t, x in enumerate(members)}
        pairs = [
            (local[x], local[y])
            for x in members
            for y in g.full_nbrs[x]
            if x < y
        ]
        u = UndirectedGraph.from_pairs(len(members), pairs)
        order = max_cardinality_search(u, seed=0)
        m = len(members)
        # first visited gets the highest number
        for t, loc in enumerate(order):
            ranks[members[loc]] = nxt + (m - 1 - t)
        nxt += m
    return ranks, nxt


def _response_ranks(st: _State, g: RegressionGraph, first_rank: int) -> dict[int, int]:
    """Number response nodes so that every arrow inside a block runs high to low."""
    ranks: dict[int, int] = {}
    nxt = first_rank
    blocks = [c for c in g.ordered_components() if min(c) not in g.context]
    for block in reversed(blocks):
        # sinks (no arrow to another block member) receive the lowest numbers
        out_deg = {x: 0 for x in block}
        inside_parents: dict[int, list[int]] = {x: [] for x in block}
        for x in block:
            for p in st.parents[x]:
                if p in block:
                    out_deg[p] += 1
                    inside_parents[x].append(p)
        heap = [x for x in block if out_deg[x] == 0]
        heapq.heapify(heap)
        placed = 0
        while heap:
            x = heapq.heappop(heap)
            ranks[x] = nxt + placed
            placed += 1
            for p in inside_parents[x]:
                out_deg[p] -= 1
                if out_deg[p] == 0:
                    heapq.heappush(heap, p)
        if placed != len(block):
            raise InternalInvariantViolation("sink-V replacements closed a directed cycle inside a block")
        nxt += len(block)
    return ranks


def orient_to_dag(g: RegressionGraph) -> OrientationResult:
    verdict = dag_orientable(g)
    if not verdict:
        raise NotOrientable(verdict.reason, verdict.witness)
    st = _State(g)

    # steps 1-2
    ranks, next_rank = _context_ranks(g, 1)
    for key in sorted(st.edges):
        e = st.edges[key]
        if e.kind is EdgeKind.FULL:
            hi, lo = (e.u, e.v) if ranks[e.u] > ranks[e.v] else (e.v, e.u)
            st.orient(2, hi, lo)

    # step 3: i~o~k and i~o<-k with i, k uncoupled become i->o<-k
    changed = True
    while changed:
        changed = False
        for o in range(g.n):
            heads = sorted(st.parents[o] | st.dashed[o])
            if len(heads) < 2 or not st.dashed[o]:
                continue
            for x, i in enumerate(heads):
                for k in heads[x + 1 :]:
                    if k in g.adj[i]:
                        continue
                    if i in st.dashed[o] or k in st.dashed[o]:
                        if i in st.dashed[o]:
                            st.orient(3, i, o)
                        if k in st.dashed[o]:
                            st.orient(3, k, o)
                        changed = True

    ranks.update(_response_ranks(st, g, next_rank))

    # step 4: dashed triangles i~o~k become sink paths into the lowest-numbered node
    changed = True
    while changed:
        changed = False
        for o in sorted(range(g.n), key=ranks.__getitem__):
            dn = sorted(st.dashed[o])
            for x, i in enumerate(dn):
                for k in dn[x + 1 :]:
                    if k in g.adj[i] and ranks[i] > ranks[o] and ranks[k] > ranks[o]:
                        if i in st.dashed[o] and k in st.dashed[o]:
                            st.orient(4, i, o)
                            st.orient(4, k, o)
                            changed = True

    # step 5
    for key in sorted(st.edges):
        e = st.edges[key]
        if e.kind is EdgeKind.DASHED:
            hi, lo = (e.u, e.v) if ranks[e.u] > ranks[e.v] else (e.v, e.u)
            st.orient(5, hi, lo)

    result = OrientationResult(g.labels, tuple(sorted(st.edges.values())), ranks, st.log)
    if not verify_orientation(g, result, use_oracle=False):
        raise InternalInvariantViolation("orientation changed the skeleton or the collision Vs")
    return result


def verify_orientation(g: RegressionGraph, result: OrientationResult, use_oracle: bool = True) -> bool:
    if tuple(result.labels) != g.labels:
        return False
    if any(e.kind is not EdgeKind.ARROW for e in result.arrows):
        return False
    if not _acyclic(g.n, result.arrows):
        return False
    try:
        dag = result.dag
    except (CycleViolation, DuplicateEdge, SelfLoop):
        return False
    if skeleton(dag).edges != skeleton(g).edges:
        return False
    if {v.triple for v in collision_vs(dag)} != {v.triple for v in collision_vs(g)}:
        return False
    if not markov_equivalent(g, dag).equivalent:
        return False
    if use_oracle and g.n <= MAX_SINGLETON_NODES:
        return structures_equal(g, dag)
    return True


def _acyclic(n: int, arrows) -> bool:
    indeg = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for e in arrows:
        indeg[e.v] += 1
        children[e.u].append(e.v)
    stack = [x for x in range(n) if indeg[x] == 0]
    seen = 0
    while stack:
        x = stack.pop()
        seen += 1
        for y in children[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    return seen == n
