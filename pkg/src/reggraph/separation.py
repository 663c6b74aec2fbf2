"""V-configurations, active paths and the global Markov property."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import BadSets, MissingEdge, NotAPath, NotIncident
from .graph import Edge, EdgeKind, Mark, RegressionGraph, UndirectedGraph, ancestral_closure


class NodeClass(str, Enum):
    COLLISION = "collision"
    TRANSMITTING = "transmitting"


class CollisionType(str, Enum):
    UNDIRECTED = "undirected"
    DIRECTED = "directed"
    SEMI_DIRECTED = "semi-directed"


@dataclass(frozen=True, order=True)
class VConfig:
    """Induced two-edge path ``h - inner - k`` with unordered endpoints (``h < k``)."""

    h: int
    inner: int
    k: int
    cls: NodeClass
    subtype: CollisionType | None = None

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.h, self.inner, self.k)

    def format(self, labels: Sequence[str]) -> str:
        return f"({labels[self.h]},{labels[self.inner]},{labels[self.k]})"


@dataclass(frozen=True)
class IndependenceStatement:
    a: frozenset[int]
    b: frozenset[int]
    c: frozenset[int]

    def __post_init__(self) -> None:
        if not self.a or not self.b:
            raise BadSets("a and b must be nonempty")
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise BadSets("a, b and c must be pairwise disjoint")

    @classmethod
    def of(cls, a: Iterable[int], b: Iterable[int], c: Iterable[int] = ()) -> "IndependenceStatement":
        a, b = frozenset(a), frozenset(b)
        if sorted(b) < sorted(a):
            a, b = b, a
        return cls(a, b, frozenset(c))

    def sort_key(self) -> tuple:
        return (sorted(self.a), sorted(self.b), len(self.c), sorted(self.c))

    def format(self, labels: Sequence[str]) -> str:
        def fmt(s: frozenset[int]) -> str:
            return "{" + ",".join(sorted(labels[i] for i in s)) + "}"

        left, right = sorted([fmt(self.a), fmt(self.b)])
        return f"{left} _||_ {right} | {fmt(self.c)}"


def node_mark(g: RegressionGraph, e: Edge, at: int) -> Mark:
    if at not in (e.u, e.v):
        raise NotIncident(f"node {g.labels[at]} is not an endpoint of the edge")
    return e.mark_at(at)


def _classify(g: RegressionGraph, h: int, i: int, k: int) -> tuple[NodeClass, CollisionType | None]:
    if g.has_head(i, h) and g.has_head(i, k):
        n_dashed = (h in g.dashed_nbrs[i]) + (k in g.dashed_nbrs[i])
        sub = (CollisionType.DIRECTED, CollisionType.SEMI_DIRECTED, CollisionType.UNDIRECTED)[n_dashed]
        return NodeClass.COLLISION, sub
    return NodeClass.TRANSMITTING, None


def classify_inner(g: RegressionGraph, h: int, i: int, k: int) -> NodeClass:
    """Collision iff both edges at ``i`` carry a head mark.  ``h`` and ``k`` may be coupled."""
    if h not in g.adj[i] or k not in g.adj[i]:
        raise MissingEdge("both h-i and i-k edges must be present")
    return _classify(g, h, i, k)[0]


def v_config(g: RegressionGraph, h: int, i: int, k: int) -> VConfig:
    if h not in g.adj[i] or k not in g.adj[i]:
        raise MissingEdge("both h-i and i-k edges must be present")
    if h == k or g.adjacent(h, k):
        raise MissingEdge("endpoints of a V must be distinct and uncoupled")
    cls, sub = _classify(g, h, i, k)
    h, k = min(h, k), max(h, k)
    return VConfig(h, i, k, cls, sub)


def all_vs(g: RegressionGraph) -> list[VConfig]:
    out = []
    for i in range(g.n):
        nb = sorted(g.adj[i])
        for x, h in enumerate(nb):
            for k in nb[x + 1 :]:
                if k not in g.adj[h]:
                    cls, sub = _classify(g, h, i, k)
                    out.append(VConfig(h, i, k, cls, sub))
    return sorted(out)


def collision_vs(g: RegressionGraph) -> set[VConfig]:
    out = set()
    for i in range(g.n):
        heads = sorted(g.parents[i] | g.dashed_nbrs[i])
        for x, h in enumerate(heads):
            for k in heads[x + 1 :]:
                if k not in g.adj[h]:
                    out.add(VConfig(h, i, k, *_classify(g, h, i, k)))
    return out


def transmitting_vs(g: RegressionGraph) -> list[VConfig]:
    return [v for v in all_vs(g) if v.cls is NodeClass.TRANSMITTING]


def _check_sets(g: RegressionGraph, a, b, c) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    if not a or not b:
        raise BadSets("a and b must be nonempty")
    if a & b or a & c or b & c:
        raise BadSets("a, b and c must be pairwise disjoint")
    for x in a | b | c:
        if not 0 <= x < g.n:
            raise BadSets(f"node index {x} out of range")
    return a, b, c


def is_active_path(g: RegressionGraph, path: Sequence[int], a, b, c) -> bool:
    """True if ``path`` is active given ``c``; False if it breaks."""
    a, b, c = _check_sets(g, a, b, c)
    if len(path) < 2 or len(set(path)) != len(path):
        raise NotAPath("a path needs at least two distinct nodes and no repeats")
    for x, y in zip(path, path[1:]):
        if not g.adjacent(x, y):
            raise NotAPath(f"{g.labels[x]} and {g.labels[y]} are not adjacent")
    if not ((path[0] in a and path[-1] in b) or (path[0] in b and path[-1] in a)):
        raise NotAPath("path must run from a node of a to a node of b")
    anc_c = None
    outside = a | b | c
    for h, i, k in zip(path, path[1:], path[2:]):
        if g.has_head(i, h) and g.has_head(i, k):
            if anc_c is None:
                anc_c = ancestral_closure(g, c)
            if i not in anc_c:
                return False
        elif i in outside:
            return False
    return True


def separates(g: RegressionGraph, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> bool:
    """True iff every path between ``a`` and ``b`` breaks given ``c``.

    Reachability over states (node, mark of the edge we arrived by, at that
    node).  Collision nodes may be passed when they are in ``c`` or have a
    descendant in ``c``; transmitting nodes only when outside a, b and c.
    """
    a, b, c = _check_sets(g, a, b, c)
    anc_c = ancestral_closure(g, c)
    blocked = a | b | c
    parents, dashed, adj = g.parents, g.dashed_nbrs, g.adj
    # state: (node, arrived_with_head)
    seen: set[tuple[int, bool]] = set()
    stack: list[tuple[int, bool]] = []
    for s in a:
        for t in adj[s]:
            if t in b:
                return False
            if t in a:
                continue
            st = (t, s in parents[t] or s in dashed[t])
            if st not in seen:
                seen.add(st)
                stack.append(st)
    while stack:
        t, head_in = stack.pop()
        as_collider = head_in and t in anc_c
        as_transmitter = t not in blocked
        if not (as_collider or as_transmitter):
            continue
        heads = parents[t] | dashed[t]
        for w in adj[t]:
            head_out = w in heads
            if head_in and head_out:
                if not as_collider:
                    continue
            elif not as_transmitter:
                continue
            if w in b:
                return False
            if w in a:
                continue
            st = (w, t in parents[w] or t in dashed[w])
            if st not in seen:
                seen.add(st)
                stack.append(st)
    return True


def pairwise_independences(g: RegressionGraph) -> list[IndependenceStatement]:
    """One defining statement per uncoupled pair, read from the compatible ordering."""
    out = []
    ctx = g.context
    for i in range(g.n):
        for k in range(i + 1, g.n):
            if g.adjacent(i, k):
                continue
            if i in ctx and k in ctx:
                cond = ctx - {i, k}
            elif g.component_of(i) == g.component_of(k):
                cond = g.past(i)
            else:
                first, second = (i, k) if g.position(i) < g.position(k) else (k, i)
                cond = g.past(first) - {second}
            out.append(IndependenceStatement.of({i}, {k}, cond))
    return sorted(out, key=IndependenceStatement.sort_key)


def marginal_independent(u: UndirectedGraph, a: Iterable[int], b: Iterable[int]) -> bool:
    a, b = frozenset(a), frozenset(b)
    if not a or not b or a & b:
        raise BadSets("a and b must be disjoint and nonempty")
    return not any((x in a and y in b) or (x in b and y in a) for x, y in u.edges)


def undirected_separates(u: UndirectedGraph, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> bool:
    """Separation in a concentration graph (paths must hit ``c``) or a
    covariance graph (paths must hit the marginalised set ``m``)."""
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    if not a or not b or a & b or a & c or b & c:
        raise BadSets("a, b and c must be pairwise disjoint; a and b nonempty")
    if u.flavor == "covariance":
        allowed = c
    else:
        allowed = frozenset(range(u.n)) - (a | b | c)
    nb = u.neighbors()
    seen = set(a)
    stack = list(a)
    while stack:
        x = stack.pop()
        for y in nb[x]:
            if y in b:
                return False
            if y in seen or y not in allowed:
                continue
            seen.add(y)
            stack.append(y)
    return True


__all__ = [
    "CollisionType",
    "EdgeKind",
    "IndependenceStatement",
    "NodeClass",
    "VConfig",
    "all_vs",
    "classify_inner",
    "collision_vs",
    "is_active_path",
    "marginal_independent",
    "node_mark",
    "pairwise_independences",
    "separates",
    "transmitting_vs",
    "undirected_separates",
    "v_config",
]
