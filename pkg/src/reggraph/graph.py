"""Regression graph data model.

A regression graph has three edge kinds: arrows (directed dependences),
dashed lines (associations among joint responses) and full lines
(associations among context variables).  Nodes are addressed internally by
dense integer indices; labels are only used for input and output.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    CycleViolation,
    DuplicateEdge,
    EdgeTypeViolation,
    InvalidLabel,
    SelfLoop,
    UnknownLabel,
)


class EdgeKind(str, Enum):
    ARROW = "arrow"
    DASHED = "dashed"
    FULL = "full"

    @property
    def token(self) -> str:
        return _TOKENS[self]


_TOKENS = {EdgeKind.ARROW: "->", EdgeKind.DASHED: "~~", EdgeKind.FULL: "--"}


class Mark(str, Enum):
    HEAD = "head"
    TAIL = "tail"


@dataclass(frozen=True, order=True)
class Edge:
    """One edge.  Arrows run ``u -> v``; undirected edges keep ``u < v``."""

    u: int
    v: int
    kind: EdgeKind

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def mark_at(self, node: int) -> Mark:
        if self.kind is EdgeKind.DASHED:
            return Mark.HEAD
        if self.kind is EdgeKind.FULL:
            return Mark.TAIL
        return Mark.HEAD if node == self.v else Mark.TAIL

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


_RESERVED = frozenset({"->", "--", "~~", "nodes:", "context:"})


def _check_label(label: str) -> None:
    # '#' and the reserved tokens would not survive a round trip through the text format
    if (
        not isinstance(label, str)
        or not label
        or any(ch.isspace() for ch in label)
        or "#" in label
        or label in _RESERVED
    ):
        raise InvalidLabel(f"invalid node label {label!r}")


class RegressionGraph:
    """Immutable regression graph over nodes ``0..n-1``.

    Construct through :func:`build_graph` (labels) or
    :meth:`RegressionGraph.from_edges` (indices); both validate.
    """

    __slots__ = (
        "labels",
        "context",
        "_edges",
        "adj",
        "parents",
        "children",
        "dashed_nbrs",
        "full_nbrs",
        "_index",
        "_components",
        "_comp_of",
        "_order",
    )

    def __init__(self, labels: Sequence[str], context: Iterable[int], edges: Iterable[Edge]):
        self.labels: tuple[str, ...] = tuple(labels)
        n = len(self.labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != n:
            raise InvalidLabel("duplicate node labels")
        for lab in self.labels:
            _check_label(lab)
        self.context: frozenset[int] = frozenset(context)
        emap: dict[tuple[int, int], Edge] = {}
        adj = [set() for _ in range(n)]
        parents = [set() for _ in range(n)]
        children = [set() for _ in range(n)]
        dashed = [set() for _ in range(n)]
        full = [set() for _ in range(n)]
        for e in edges:
            if e.u == e.v:
                raise SelfLoop(f"self-loop at {self.labels[e.u]}")
            if e.kind is not EdgeKind.ARROW and e.u > e.v:
                e = Edge(e.v, e.u, e.kind)
            key = e.pair
            if key in emap:
                a, b = (self.labels[i] for i in key)
                raise DuplicateEdge(f"more than one edge between {a} and {b}")
            self._check_type(e)
            emap[key] = e
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
            if e.kind is EdgeKind.ARROW:
                children[e.u].add(e.v)
                parents[e.v].add(e.u)
            elif e.kind is EdgeKind.DASHED:
                dashed[e.u].add(e.v)
                dashed[e.v].add(e.u)
            else:
                full[e.u].add(e.v)
                full[e.v].add(e.u)
        self._edges = emap
        self.adj = tuple(frozenset(s) for s in adj)
        self.parents = tuple(frozenset(s) for s in parents)
        self.children = tuple(frozenset(s) for s in children)
        self.dashed_nbrs = tuple(frozenset(s) for s in dashed)
        self.full_nbrs = tuple(frozenset(s) for s in full)
        self._components, self._comp_of = self._find_components()
        self._order = self._find_order()

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, EdgeKind]],
        context: Iterable[int] = (),
        labels: Sequence[str] | None = None,
    ) -> "RegressionGraph":
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(labels, context, (Edge(u, v, k) for u, v, k in edges))

    def _check_type(self, e: Edge) -> None:
        cu, cv = e.u in self.context, e.v in self.context
        a, b = self.labels[e.u], self.labels[e.v]
        if e.kind is EdgeKind.FULL and not (cu and cv):
            raise EdgeTypeViolation(f"full line {a} -- {b} touches a response node")
        if e.kind is EdgeKind.DASHED and (cu or cv):
            raise EdgeTypeViolation(f"dashed line {a} ~~ {b} touches a context node")
        if e.kind is EdgeKind.ARROW and cv:
            raise EdgeTypeViolation(f"arrow {a} -> {b} points to a context node")

    def _find_components(self) -> tuple[tuple[frozenset[int], ...], tuple[int, ...]]:
        n = self.n
        comp_of = [-1] * n
        comps: list[frozenset[int]] = []
        for start in range(n):
            if comp_of[start] >= 0:
                continue
            cid = len(comps)
            comp_of[start] = cid
            members = [start]
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.dashed_nbrs[x] | self.full_nbrs[x]:
                    if comp_of[y] < 0:
                        comp_of[y] = cid
                        members.append(y)
                        queue.append(y)
            comps.append(frozenset(members))
        return tuple(comps), tuple(comp_of)

    def _find_order(self) -> tuple[int, ...]:
        # Quotient graph: one super-node per component, arrows kept.  Any cycle
        # there is a directed or semi-directed cycle of the graph.
        comps = self._components
        out: list[set[int]] = [set() for _ in comps]
        for e in self._edges.values():
            if e.kind is EdgeKind.ARROW:
                cu, cv = self._comp_of[e.u], self._comp_of[e.v]
                if cu == cv:
                    raise CycleViolation(
                        f"semi-directed cycle through arrow {self.labels[e.u]} -> {self.labels[e.v]}"
                    )
                out[cu].add(cv)
        # g_1 is the component with no outgoing arrows; arrows go later -> earlier.
        remaining_out = [len(s) for s in out]
        incoming: list[list[int]] = [[] for _ in comps]
        for c, targets in enumerate(out):
            for t in targets:
                incoming[t].append(c)

        def key(c: int) -> tuple[int, int]:
            is_context = 1 if min(comps[c]) in self.context else 0
            return (is_context, min(comps[c]))

        heap = [key(c) + (c,) for c in range(len(comps)) if remaining_out[c] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            *_, c = heapq.heappop(heap)
            order.append(c)
            for src in incoming[c]:
                remaining_out[src] -= 1
                if remaining_out[src] == 0:
                    heapq.heappush(heap, key(src) + (src,))
        if len(order) != len(comps):
            raise CycleViolation("directed or semi-directed cycle between components")
        return tuple(order)

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def responses(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.context

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown node label {label!r}") from None

    def indices(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(lab) for lab in labels)

    def edge(self, i: int, k: int) -> Edge | None:
        return self._edges.get((i, k) if i < k else (k, i))

    def edges(self) -> list[Edge]:
        return sorted(self._edges.values(), key=lambda e: (e.pair, e.kind.value))

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def adjacent(self, i: int, k: int) -> bool:
        return k in self.adj[i]

    def mark(self, at: int, other: int) -> Mark:
        """Mark at ``at`` on the edge joining ``at`` and ``other``."""
        e = self._edges[(at, other) if at < other else (other, at)]
        return e.mark_at(at)

    def has_head(self, at: int, other: int) -> bool:
        return other in self.parents[at] or other in self.dashed_nbrs[at]

    def label_set(self, nodes: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(nodes)]

    def is_dag(self) -> bool:
        return all(e.kind is EdgeKind.ARROW for e in self._edges.values())

    # -- structure -----------------------------------------------------

    @property
    def components(self) -> tuple[frozenset[int], ...]:
        return self._components

    def component_of(self, i: int) -> frozenset[int]:
        return self._components[self._comp_of[i]]

    def ordered_components(self) -> list[frozenset[int]]:
        return [self._components[c] for c in self._order]

    def past(self, i: int) -> frozenset[int]:
        """Union of the components after the one holding ``i`` (its g_{>j})."""
        pos = self._order.index(self._comp_of[i])
        out: set[int] = set()
        for c in self._order[pos + 1 :]:
            out |= self._components[c]
        return frozenset(out)

    def position(self, i: int) -> int:
        return self._order.index(self._comp_of[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegressionGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.context == other.context
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.context, frozenset(self._edges.values())))

    def __repr__(self) -> str:
        parts = [f"{self.labels[e.u]} {e.kind.token} {self.labels[e.v]}" for e in self.edges()]
        return f"RegressionGraph(n={self.n}, context={self.label_set(self.context)}, edges=[{', '.join(parts)}])"


@dataclass(frozen=True)
class UndirectedGraph:
    """Plain undirected graph; ``flavor`` records how missing edges are read."""

    labels: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    flavor: str = "skeleton"

    def __post_init__(self) -> None:
        if self.flavor not in ("skeleton", "covariance", "concentration"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop at {self.labels[u]}")
            if u > v:
                raise ValueError("undirected edges must be stored as (low, high)")

    @classmethod
    def from_pairs(
        cls, n: int, pairs: Iterable[tuple[int, int]], flavor: str = "skeleton", labels: Sequence[str] | None = None
    ) -> "UndirectedGraph":
        labs = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        return cls(labs, frozenset((min(u, v), max(u, v)) for u, v in pairs), flavor)

    @property
    def n(self) -> int:
        return len(self.labels)

    def neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return nb

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def with_flavor(self, flavor: str) -> "UndirectedGraph":
        return UndirectedGraph(self.labels, self.edges, flavor)

    def as_regression_graph(self) -> RegressionGraph:
        """Covariance graphs become all-dashed response graphs, everything else
        all-full context graphs."""
        if self.flavor == "covariance":
            return RegressionGraph.from_edges(
                self.n, ((u, v, EdgeKind.DASHED) for u, v in self.edges), (), self.labels
            )
        return RegressionGraph.from_edges(
            self.n, ((u, v, EdgeKind.FULL) for u, v in self.edges), range(self.n), self.labels
        )


# -- operations ---------------------------------------------------------


def build_graph(
    nodes: Sequence[str],
    context: Iterable[str],
    edges: Iterable[tuple[str, str, EdgeKind]],
) -> RegressionGraph:
    """Validate labelled input and return a :class:`RegressionGraph`.

    Arrow triples read ``(tail, head, ARROW)``.
    """
    nodes = list(nodes)
    for lab in nodes:
        _check_label(lab)
    if len(set(nodes)) != len(nodes):
        raise InvalidLabel("node labels must be distinct")
    index = {lab: i for i, lab in enumerate(nodes)}

    def idx(lab: str) -> int:
        try:
            return index[lab]
        except KeyError:
            raise UnknownLabel(f"unknown node label {lab!r}") from None

    ctx = {idx(lab) for lab in context}
    out = [Edge(idx(a), idx(b), EdgeKind(kind)) for a, b, kind in edges]
    return RegressionGraph(nodes, ctx, out)


def connected_components(g: RegressionGraph) -> list[frozenset[int]]:
    return sorted(g.components, key=min)


def compatible_ordering(g: RegressionGraph) -> list[frozenset[int]]:
    """Components g_1..g_J with every arrow pointing from a later to an earlier one.

    Response components come before context components; ties go to the
    component with the smallest member index.
    """
    return g.ordered_components()


def skeleton(g: RegressionGraph) -> UndirectedGraph:
    return UndirectedGraph(g.labels, frozenset(e.pair for e in g.edges()), "skeleton")


def strict_descendants(g: RegressionGraph, i: int) -> frozenset[int]:
    seen: set[int] = set()
    stack = list(g.children[i])
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        stack.extend(g.children[x] - seen)
    seen.discard(i)
    return frozenset(seen)


def ancestral_closure(g: RegressionGraph, c: Iterable[int]) -> frozenset[int]:
    """``c`` together with every node having a strict descendant in ``c``."""
    seen = set(c)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for p in g.parents[x]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def induced_subgraph(g: RegressionGraph, s: Iterable[int]) -> RegressionGraph:
    keep = sorted(set(s))
    for i in keep:
        if not 0 <= i < g.n:
            raise UnknownLabel(f"node index {i} not in graph")
    new = {old: new for new, old in enumerate(keep)}
    edges = [
        Edge(new[e.u], new[e.v], e.kind)
        for e in g.edges()
        if e.u in new and e.v in new
    ]
    return RegressionGraph([g.labels[i] for i in keep], (new[i] for i in g.context if i in new), edges)
